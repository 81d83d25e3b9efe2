#pragma once

#include <cstdint>
#include <vector>

#include "simlearn/bounds.hpp"
#include "simlearn/core.hpp"
#include "simlearn/hypotheses.hpp"
#include "simlearn/optimizer.hpp"

namespace simlearn {

/// Data law for synthetic experiments: x uniform in the radius_r ball of
/// R^N, D_ij = |W_true (x_i - x_j)| + noise with |W_true|_2 = target_map_norm.
/// Noise is N(0, noise_sigma^2) truncated to +-2 sigma, symmetric, and
/// clamped so D stays nonnegative.
struct SyntheticSpec {
  Eigen::Index m = 50;
  Eigen::Index n_features = 2;
  Eigen::Index k_true = 2;
  double radius_r = 1.0;
  double target_map_norm = 1.0;
  double noise_sigma = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  SampleMatrix features;
  DistanceMatrix distances;
  Matrix w_true;
};

/// Hidden map drawn from spec.seed.
Matrix draw_target_map(const SyntheticSpec& spec);

/// n points plus targets under the law of `spec`. The hidden map comes from
/// spec.seed; the points and noise come from sample_seed.
SyntheticData draw_sample(const SyntheticSpec& spec, std::uint64_t sample_seed, Eigen::Index n);

/// draw_sample(spec, spec.seed, spec.m).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Plug-in estimate of R(h): empirical risk on n_holdout fresh points drawn
/// from the same law with sample_seed.
double holdout_risk(const Model& model, const SyntheticSpec& spec, std::uint64_t sample_seed,
                    Eigen::Index n_holdout);

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  double train_risk = 0.0;
  double holdout_risk = 0.0;
  double gap = 0.0;
  double certificate_slack = 0.0;
  double certificate_bound = 0.0;
  bool covered = false;
  bool converged = false;
};

struct ExperimentReport {
  int n_trials = 0;
  double coverage_rate = 0.0;
  double delta = 0.0;
  double mean_gap = 0.0;
  double mean_slack = 0.0;
  int n_nonconverged = 0;
  bool passed = false;  // coverage_rate >= 1 - delta
  std::vector<TrialResult> trials;
};

struct CoverageConfig {
  double delta = 0.05;
  int n_trials = 200;
  Eigen::Index n_holdout = 0;  // 0 means 10 * m
  unsigned workers = 1;        // 0 means hardware concurrency
};

/// Trial t uses data seed spec.seed + t and training seed cfg.seed + t.
/// Results are merged by trial index, so the report does not depend on the
/// number of workers.
ExperimentReport run_coverage_experiment(const SyntheticSpec& spec, const HypothesisClass& cls,
                                         const TrainConfig& cfg, const CoverageConfig& coverage);

}  // namespace simlearn
