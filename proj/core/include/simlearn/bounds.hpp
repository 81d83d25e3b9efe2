#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "simlearn/core.hpp"
#include "simlearn/hypotheses.hpp"
#include "simlearn/optimizer.hpp"

namespace simlearn {

enum class BoundMode { linear, kernel };

std::string_view to_string(BoundMode mode);

/// Data-dependent quantities a certificate was computed from. `q` is 0 in
/// linear mode.
struct CertificateInputs {
  BoundMode mode = BoundMode::linear;
  double lambda_cap = 0.0;
  double r = 0.0;
  double beta = 0.0;
  double q = 0.0;
};

/// R(h) <= empirical_risk + rademacher_term + M * sqrt(2 ln(1/delta) / m),
/// holding with probability at least 1 - delta.
struct BoundCertificate {
  double empirical_risk = 0.0;
  double rademacher_term = 0.0;  // 2 * (upper bound on the Rademacher complexity)
  double M = 0.0;
  double delta = 0.0;
  std::size_t m = 0;
  double concentration_term = 0.0;  // M * sqrt(2 ln(1/delta) / m)
  double slack = 0.0;
  double bound = 0.0;
  CertificateInputs inputs;
};

struct LinearBoundParams {
  double lambda_cap = 0.0;
  double r = 0.0;
  double beta = 0.0;
};

struct KernelBoundParams {
  double lambda_cap = 0.0;
  double q = 0.0;
  double beta = 0.0;
};

/// Per-pair loss bound: |d_hat_ij - D_ij| <= M.
/// Linear: Lambda * max(2r, beta). Kernel: Lambda * max(2q, beta), which
/// does not assume K_ij >= 0.
double loss_bound_M(const LinearBoundParams& p);
double loss_bound_M(const KernelBoundParams& p);

/// Lambda^2 * max(2r, beta)^2 / m.
double rademacher_bound_linear(double lambda_cap, double r, double beta, std::size_t m);
/// Lambda^2 * max(sqrt(2) q, beta)^2 / m.
double rademacher_bound_kernel(double lambda_cap, double q, double beta, std::size_t m);

/// M * sqrt(2 ln(1/delta) / m), natural log.
double concentration_term(double M, std::size_t m, double delta);

/// Assembles the certificate from its ingredients. delta must lie in (0, 1];
/// delta = 1 is accepted as the limit where the concentration term vanishes.
BoundCertificate generalization_bound(double empirical_risk, double rademacher_upper, double M,
                                      std::size_t m, double delta);

/// Certificate for a trained model on (S, D). The certified norm budget is
/// max(lambda_cap, model_norm) so the class always contains the model.
BoundCertificate certify(const Model& model, const SampleMatrix& sample,
                         const DistanceMatrix& target, double delta);

struct RademacherEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::vector<double> draws;
};

/// Monte Carlo estimate of E_sigma[sup_h (1/m^2) sum_ij sigma_ij (d_hat_ij - D_ij)^2]
/// with sigma_ij = sigma_ji uniform in {-1, +1}. The inner sup is taken by
/// projected gradient ascent under `inner_cfg` (step_size, max_iters,
/// grad_tol, smoothing_eps), so the result is biased low. Draw t uses its
/// own stream derived from (seed, t).
RademacherEstimate empirical_rademacher_mc(const SampleMatrix& sample,
                                           const DistanceMatrix& target,
                                           const HypothesisClass& cls, int n_sigma,
                                           const TrainConfig& inner_cfg, std::uint64_t seed);

}  // namespace simlearn
