#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "simlearn/bounds.hpp"
#include "simlearn/harness.hpp"
#include "simlearn/hypotheses.hpp"
#include "simlearn/kernels.hpp"
#include "simlearn/optimizer.hpp"

namespace simlearn {

// JSON documents exchanged with other tools. Matrices are row-major arrays
// of arrays. Parsing functions throw ValidationError on malformed input.

/// {"type": "linear", "lambda_cap": ..., "W": [[...]]} or
/// {"type": "kernel", "lambda_cap": ..., "A": [[...]], "anchors": [[...]],
///  "kernel": {"family": ..., "gamma": ..., "degree": ..., "coef0": ...}}
std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

std::string kernel_spec_to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(std::string_view text);

std::string certificate_to_json(const BoundCertificate& cert);
std::string train_report_to_json(const TrainReport& report);
std::string experiment_report_to_json(const ExperimentReport& report);

/// Header `trial,train_risk,holdout_risk,gap,slack,covered`, one row per trial.
std::string trials_to_csv(const ExperimentReport& report);

std::string train_config_to_json(const TrainConfig& cfg);
/// Fields present in `text` override those of `base`; unknown keys are rejected.
TrainConfig train_config_from_json(std::string_view text, TrainConfig base = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace simlearn
