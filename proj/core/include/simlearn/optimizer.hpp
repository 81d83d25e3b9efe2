#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "simlearn/core.hpp"
#include "simlearn/hypotheses.hpp"
#include "simlearn/kernels.hpp"

namespace simlearn {

struct TrainConfig {
  double step_size = 0.5;
  int max_iters = 5000;
  /// Stop once the projected-gradient norm drops below this.
  double grad_tol = 1e-9;
  /// Weight on model_norm(h) in the objective. 0 = constrained-only.
  double penalty_lambda = 0.0;
  /// Distances are smoothed as sqrt(|.|^2 + eps^2).
  double smoothing_eps = 1e-9;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainReport {
  double final_risk = 0.0;
  int iterations_used = 0;
  double final_model_norm = 0.0;
  bool converged = false;
  bool diverged = false;
  std::vector<double> risk_trace;
};

/// Embedding dimension 0 means min(N, m).
struct LinearClass {
  Eigen::Index output_dim = 0;
  double lambda_cap = 1.0;
};

struct KernelClass {
  KernelSpec kernel;
  Eigen::Index output_dim = 0;
  double lambda_cap = 1.0;
};

using HypothesisClass = std::variant<LinearClass, KernelClass>;

struct TrainResult {
  Model model;
  TrainReport report;
};

/// Smoothed stress (1/m^2) sum_ij (d~_ij - D_ij)^2 with
/// d~_ij = sqrt(|h(x_i) - h(x_j)|^2 + eps^2). With eps = 0 this is
/// empirical_risk of the embedding distances.
double smoothed_risk(const Model& h, const SampleMatrix& sample, const DistanceMatrix& target,
                     double eps);

/// Gradient of smoothed_risk with respect to W (linear) or A (kernel). Pairs
/// with d~_ij = 0 contribute zero.
Matrix risk_gradient(const Model& h, const SampleMatrix& sample, const DistanceMatrix& target,
                     double eps);

/// smoothed_risk + penalty_lambda * model_norm(h).
double objective(const Model& h, const SampleMatrix& sample, const DistanceMatrix& target,
                 double penalty_lambda, double eps);

/// A subgradient of model_norm: u1 v1^T for the spectral norm, A K / |h|
/// for the RKHS norm. Zero at the origin.
Matrix norm_subgradient(const Model& h);

/// Value and coefficient-gradient of the sign-weighted stress
/// (1/m^2) sum_ij s_ij (d~_ij - D_ij)^2 for a fixed design matrix.
/// risk_gradient is the special case s = 1.
struct WeightedStress {
  double value = 0.0;
  Matrix gradient;
};
WeightedStress weighted_stress(const Matrix& coefficients, const Matrix& design,
                               const DistanceMatrix& target, const Matrix& pair_weights,
                               double eps);

/// Uniform entries in [-0.01, 0.01] drawn from cfg.seed.
Model initial_model(const SampleMatrix& sample, const HypothesisClass& cls,
                    std::uint64_t seed);

/// Projected gradient descent h <- P(h - step * (grad risk + lambda * subgrad norm)).
/// The kernel class requires a PSD Gram matrix on the sample.
TrainResult train(const SampleMatrix& sample, const DistanceMatrix& target,
                  const HypothesisClass& cls, const TrainConfig& cfg);

/// Same iteration started from a caller-supplied model.
TrainResult train_from(const SampleMatrix& sample, const DistanceMatrix& target, Model init,
                       const TrainConfig& cfg);

}  // namespace simlearn
