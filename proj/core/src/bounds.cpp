#include "simlearn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rng.hpp"

namespace simlearn {

namespace {

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + " must be finite and >= 0");
  }
}

void require_positive_m(std::size_t m) {
  if (m < 1) throw ValidationError("sample size m must be >= 1");
}

// Sign matrix with sigma_ji = sigma_ij; the diagonal is drawn as well.
Matrix draw_signs(Eigen::Index m, detail::Engine& eng) {
  Matrix s(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = (eng() >> 63) != 0 ? 1.0 : -1.0;
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

// Starting point on the sphere of radius lambda_cap.
Model ascent_start(const SampleMatrix& sample, const HypothesisClass& cls, detail::Engine& eng) {
  Model h = initial_model(sample, cls, 0);
  Matrix c = coefficients(h);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = unif(eng);
  }
  h = with_coefficients(h, c);
  const double norm = model_norm(h);
  const double cap = lambda_cap(h);
  return norm > 0.0 ? with_coefficients(h, c * (cap / norm)) : h;
}

}  // namespace

std::string_view to_string(BoundMode mode) {
  return mode == BoundMode::linear ? "linear" : "kernel";
}

double loss_bound_M(const LinearBoundParams& p) {
  require_nonnegative(p.lambda_cap, "lambda_cap");
  require_nonnegative(p.r, "r");
  require_nonnegative(p.beta, "beta");
  return p.lambda_cap * std::max(2.0 * p.r, p.beta);
}

double loss_bound_M(const KernelBoundParams& p) {
  require_nonnegative(p.lambda_cap, "lambda_cap");
  require_nonnegative(p.q, "q");
  require_nonnegative(p.beta, "beta");
  return p.lambda_cap * std::max(2.0 * p.q, p.beta);
}

double rademacher_bound_linear(double lambda_cap, double r, double beta, std::size_t m) {
  require_nonnegative(lambda_cap, "lambda_cap");
  require_nonnegative(r, "r");
  require_nonnegative(beta, "beta");
  require_positive_m(m);
  const double radius = std::max(2.0 * r, beta);
  return lambda_cap * lambda_cap * radius * radius / static_cast<double>(m);
}

double rademacher_bound_kernel(double lambda_cap, double q, double beta, std::size_t m) {
  require_nonnegative(lambda_cap, "lambda_cap");
  require_nonnegative(q, "q");
  require_nonnegative(beta, "beta");
  require_positive_m(m);
  const double radius = std::max(std::sqrt(2.0) * q, beta);
  return lambda_cap * lambda_cap * radius * radius / static_cast<double>(m);
}

double concentration_term(double M, std::size_t m, double delta) {
  require_nonnegative(M, "M");
  require_positive_m(m);
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ValidationError("delta must lie in (0, 1], got " + std::to_string(delta));
  }
  return M * std::sqrt(2.0 * std::log(1.0 / delta) / static_cast<double>(m));
}

BoundCertificate generalization_bound(double empirical_risk, double rademacher_upper, double M,
                                      std::size_t m, double delta) {
  require_nonnegative(empirical_risk, "empirical_risk");
  require_nonnegative(rademacher_upper, "rademacher bound");
  BoundCertificate cert;
  cert.empirical_risk = empirical_risk;
  cert.rademacher_term = 2.0 * rademacher_upper;
  cert.M = M;
  cert.delta = delta;
  cert.m = m;
  cert.concentration_term = concentration_term(M, m, delta);
  cert.slack = cert.rademacher_term + cert.concentration_term;
  cert.bound = cert.empirical_risk + cert.slack;
  return cert;
}

BoundCertificate certify(const Model& model, const SampleMatrix& sample,
                         const DistanceMatrix& target, double delta) {
  if (target.size() != sample.rows()) {
    throw ValidationError("certify: sample has " + std::to_string(sample.rows()) +
                          " points, distance matrix has " + std::to_string(target.size()));
  }
  const double risk = empirical_risk(embedding_distance_matrix(model, sample), target);
  const DataRadii radii = data_radii(sample, target);
  const auto m = static_cast<std::size_t>(sample.rows());

  CertificateInputs inputs;
  inputs.lambda_cap = std::max(lambda_cap(model), model_norm(model));
  inputs.r = radii.r;
  inputs.beta = radii.beta;

  double M = 0.0;
  double rademacher = 0.0;
  if (const auto* k = std::get_if<KernelMap>(&model)) {
    inputs.mode = BoundMode::kernel;
    inputs.q = feature_space_radius(gram(k->kernel(), sample));
    M = loss_bound_M(KernelBoundParams{inputs.lambda_cap, inputs.q, inputs.beta});
    rademacher = rademacher_bound_kernel(inputs.lambda_cap, inputs.q, inputs.beta, m);
  } else {
    inputs.mode = BoundMode::linear;
    M = loss_bound_M(LinearBoundParams{inputs.lambda_cap, inputs.r, inputs.beta});
    rademacher = rademacher_bound_linear(inputs.lambda_cap, inputs.r, inputs.beta, m);
  }

  BoundCertificate cert = generalization_bound(risk, rademacher, M, m, delta);
  cert.inputs = inputs;
  return cert;
}

RademacherEstimate empirical_rademacher_mc(const SampleMatrix& sample,
                                           const DistanceMatrix& target,
                                           const HypothesisClass& cls, int n_sigma,
                                           const TrainConfig& inner_cfg, std::uint64_t seed) {
  if (n_sigma < 1) {
    throw ValidationError("empirical_rademacher_mc: n_sigma must be >= 1");
  }
  inner_cfg.validate();
  if (target.size() != sample.rows()) {
    throw ValidationError("empirical_rademacher_mc: sample/target size mismatch");
  }

  const Eigen::Index m = sample.rows();
  RademacherEstimate out;
  out.draws.reserve(static_cast<std::size_t>(n_sigma));

  Matrix design;
  for (int t = 0; t < n_sigma; ++t) {
    auto eng = detail::make_engine(seed, static_cast<std::uint64_t>(t));
    const Matrix signs = draw_signs(m, eng);
    Model h = ascent_start(sample, cls, eng);
    if (design.size() == 0) design = design_matrix(h, sample.values());

    double best = weighted_stress(coefficients(h), design, target, signs, 0.0).value;
    for (int it = 0; it < inner_cfg.max_iters; ++it) {
      const WeightedStress ws =
          weighted_stress(coefficients(h), design, target, signs, inner_cfg.smoothing_eps);
      Model next = project_norm_ball(
          with_coefficients(h, coefficients(h) + inner_cfg.step_size * ws.gradient));
      const double moved = (coefficients(next) - coefficients(h)).norm() / inner_cfg.step_size;
      h = std::move(next);
      best = std::max(best, weighted_stress(coefficients(h), design, target, signs, 0.0).value);
      if (moved < inner_cfg.grad_tol) break;
    }
    out.draws.push_back(best);
  }

  const auto n = static_cast<double>(n_sigma);
  double mean = 0.0;
  for (double v : out.draws) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : out.draws) ss += (v - mean) * (v - mean);
  out.estimate = mean;
  out.std_error = n_sigma > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return out;
}

}  // namespace simlearn
