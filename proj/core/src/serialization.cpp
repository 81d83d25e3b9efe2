#include "simlearn/serialization.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace simlearn {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& mat) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(std::string("'") + field + "' must be a non-empty array of arrays");
  }
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  Matrix mat(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != cols) {
      throw ValidationError(std::string("'") + field + "' is not a rectangular matrix");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw ValidationError(std::string("'") + field + "' has a non-numeric entry");
      }
      mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return mat;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

double require_number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

json kernel_json(const KernelSpec& spec) {
  return {{"family", std::string(to_string(spec.family))},
          {"gamma", spec.gamma},
          {"degree", spec.degree},
          {"coef0", spec.coef0}};
}

KernelSpec kernel_from(const json& j) {
  KernelSpec spec;
  const json& family = require(j, "family");
  if (!family.is_string()) throw ValidationError("kernel 'family' must be a string");
  spec.family = kernel_family_from_string(family.get<std::string>());
  if (j.contains("gamma")) spec.gamma = require_number(j, "gamma");
  if (j.contains("degree")) {
    const json& d = j.at("degree");
    if (!d.is_number_integer()) throw ValidationError("kernel 'degree' must be an integer");
    spec.degree = d.get<int>();
  }
  if (j.contains("coef0")) spec.coef0 = require_number(j, "coef0");
  spec.validate();
  return spec;
}

// Non-finite values have no JSON encoding; they are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string model_to_json(const Model& model) {
  json j;
  if (const auto* l = std::get_if<LinearMap>(&model)) {
    j["type"] = "linear";
    j["lambda_cap"] = l->lambda_cap();
    j["W"] = matrix_to_json(l->weights());
  } else {
    const auto& k = std::get<KernelMap>(model);
    j["type"] = "kernel";
    j["lambda_cap"] = k.lambda_cap();
    j["A"] = matrix_to_json(k.coefficients());
    j["anchors"] = matrix_to_json(k.anchors().values());
    j["kernel"] = kernel_json(k.kernel());
  }
  return j.dump(2) + "\n";
}

Model model_from_json(std::string_view text) {
  const json j = parse(text);
  const json& type = require(j, "type");
  if (!type.is_string()) throw ValidationError("model 'type' must be a string");
  const double cap = require_number(j, "lambda_cap");
  if (type == "linear") {
    return LinearMap(matrix_from_json(require(j, "W"), "W"), cap);
  }
  if (type == "kernel") {
    return KernelMap(matrix_from_json(require(j, "A"), "A"),
                     SampleMatrix(matrix_from_json(require(j, "anchors"), "anchors")),
                     kernel_from(require(j, "kernel")), cap);
  }
  throw ValidationError("unknown model type '" + type.get<std::string>() + "'");
}

std::string kernel_spec_to_json(const KernelSpec& spec) { return kernel_json(spec).dump(); }

KernelSpec kernel_spec_from_json(std::string_view text) { return kernel_from(parse(text)); }

std::string certificate_to_json(const BoundCertificate& cert) {
  json j;
  j["mode"] = std::string(to_string(cert.inputs.mode));
  j["lambda_cap"] = cert.inputs.lambda_cap;
  j["r"] = cert.inputs.r;
  j["beta"] = cert.inputs.beta;
  j["q"] = cert.inputs.q;
  j["m"] = cert.m;
  j["delta"] = cert.delta;
  j["M"] = cert.M;
  j["empirical_risk"] = cert.empirical_risk;
  j["rademacher_term"] = cert.rademacher_term;
  j["concentration_term"] = cert.concentration_term;
  j["slack"] = cert.slack;
  j["bound"] = cert.bound;
  return j.dump(2) + "\n";
}

std::string train_report_to_json(const TrainReport& report) {
  json j;
  j["final_risk"] = number(report.final_risk);
  j["iterations_used"] = report.iterations_used;
  j["final_model_norm"] = number(report.final_model_norm);
  j["converged"] = report.converged;
  j["diverged"] = report.diverged;
  json trace = json::array();
  for (double v : report.risk_trace) trace.push_back(number(v));
  j["risk_trace"] = std::move(trace);
  return j.dump(2) + "\n";
}

std::string experiment_report_to_json(const ExperimentReport& report) {
  json j;
  j["n_trials"] = report.n_trials;
  j["coverage_rate"] = report.coverage_rate;
  j["delta"] = report.delta;
  j["mean_gap"] = number(report.mean_gap);
  j["mean_slack"] = number(report.mean_slack);
  j["n_nonconverged"] = report.n_nonconverged;
  j["passed"] = report.passed;
  json trials = json::array();
  for (const TrialResult& t : report.trials) {
    trials.push_back({{"trial", t.trial},
                      {"seed", t.seed},
                      {"train_risk", number(t.train_risk)},
                      {"holdout_risk", number(t.holdout_risk)},
                      {"gap", number(t.gap)},
                      {"slack", number(t.certificate_slack)},
                      {"bound", number(t.certificate_bound)},
                      {"covered", t.covered},
                      {"converged", t.converged}});
  }
  j["trials"] = std::move(trials);
  return j.dump(2) + "\n";
}

std::string trials_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "trial,train_risk,holdout_risk,gap,slack,covered\n";
  for (const TrialResult& t : report.trials) {
    out << t.trial << ',' << t.train_risk << ',' << t.holdout_risk << ',' << t.gap << ','
        << t.certificate_slack << ',' << (t.covered ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string train_config_to_json(const TrainConfig& cfg) {
  json j = {{"step_size", cfg.step_size},         {"max_iters", cfg.max_iters},
            {"grad_tol", cfg.grad_tol},           {"penalty_lambda", cfg.penalty_lambda},
            {"smoothing_eps", cfg.smoothing_eps}, {"seed", cfg.seed}};
  return j.dump(2) + "\n";
}

TrainConfig train_config_from_json(std::string_view text, TrainConfig base) {
  const json j = parse(text);
  if (!j.is_object()) throw ValidationError("train config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "step_size") {
      base.step_size = require_number(j, "step_size");
    } else if (key == "max_iters") {
      if (!value.is_number_integer()) throw ValidationError("'max_iters' must be an integer");
      base.max_iters = value.get<int>();
    } else if (key == "grad_tol") {
      base.grad_tol = require_number(j, "grad_tol");
    } else if (key == "penalty_lambda") {
      base.penalty_lambda = require_number(j, "penalty_lambda");
    } else if (key == "smoothing_eps") {
      base.smoothing_eps = require_number(j, "smoothing_eps");
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ValidationError("'seed' must be a nonnegative integer");
      base.seed = value.get<std::uint64_t>();
    } else {
      throw ValidationError("unknown train config key '" + key + "'");
    }
  }
  base.validate();
  return base;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace simlearn
