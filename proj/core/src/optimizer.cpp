#include "simlearn/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rng.hpp"

namespace simlearn {

namespace {

constexpr double kDivergenceRisk = 1e12;
constexpr double kPsdTol = 1e-9;

// pair_weights == nullptr means all weights are 1.
WeightedStress stress_impl(const Matrix& coefficients, const Matrix& design,
                           const DistanceMatrix& target, const Matrix* pair_weights,
                           double eps) {
  const Eigen::Index m = design.rows();
  if (target.size() != m) {
    throw ValidationError("stress: sample has " + std::to_string(m) + " points, target is " +
                          std::to_string(target.size()) + "x" + std::to_string(target.size()));
  }
  if (coefficients.cols() != design.cols()) {
    throw ValidationError("stress: coefficient matrix does not match design matrix");
  }
  if (pair_weights != nullptr && (pair_weights->rows() != m || pair_weights->cols() != m)) {
    throw ValidationError("stress: pair weights must be m x m");
  }
  if (!(eps >= 0.0)) {
    throw ValidationError("stress: eps must be >= 0");
  }

  const Matrix embedding = design * coefficients.transpose();  // m x k
  if (!embedding.allFinite()) {
    throw NumericalError("stress: non-finite embedding");
  }

  // Symmetric Laplacian of per-pair factors (s_ij + s_ji)(d~ - D)/d~.
  Matrix laplacian = Matrix::Zero(m, m);
  double value = 0.0;
  const double eps2 = eps * eps;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s_ii = pair_weights ? (*pair_weights)(i, i) : 1.0;
    value += s_ii * eps2;  // d~_ii = eps, D_ii = 0
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double s = pair_weights ? (*pair_weights)(i, j) + (*pair_weights)(j, i) : 2.0;
      const double d = std::sqrt((embedding.row(i) - embedding.row(j)).squaredNorm() + eps2);
      const double resid = d - target(i, j);
      value += s * resid * resid;
      if (d > 0.0) {
        const double w = s * resid / d;
        laplacian(i, j) = -w;
        laplacian(j, i) = -w;
        laplacian(i, i) += w;
        laplacian(j, j) += w;
      }
    }
  }

  const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
  WeightedStress out;
  out.value = value * scale;
  out.gradient = (2.0 * scale) * (embedding.transpose() * laplacian) * design;
  if (!std::isfinite(out.value) || !out.gradient.allFinite()) {
    throw NumericalError("stress: non-finite value or gradient");
  }
  return out;
}

Eigen::Index resolve_output_dim(Eigen::Index requested, const SampleMatrix& sample) {
  if (requested < 0) {
    throw ValidationError("output dimension must be >= 0");
  }
  return requested == 0 ? std::min(sample.cols(), sample.rows()) : requested;
}

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  auto eng = detail::make_engine(seed, 0x1417);
  std::uniform_real_distribution<double> unif(-0.01, 0.01);
  Matrix out(rows, cols);
  // Row-major fill order, fixed regardless of Eigen storage order.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = unif(eng);
    }
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ValidationError("TrainConfig: step_size must be > 0");
  }
  if (max_iters < 0) {
    throw ValidationError("TrainConfig: max_iters must be >= 0");
  }
  if (!(grad_tol > 0.0)) {
    throw ValidationError("TrainConfig: grad_tol must be > 0");
  }
  if (!(penalty_lambda >= 0.0) || !std::isfinite(penalty_lambda)) {
    throw ValidationError("TrainConfig: penalty_lambda must be >= 0");
  }
  if (!(smoothing_eps >= 0.0) || !std::isfinite(smoothing_eps)) {
    throw ValidationError("TrainConfig: smoothing_eps must be >= 0");
  }
}

WeightedStress weighted_stress(const Matrix& coefficients, const Matrix& design,
                               const DistanceMatrix& target, const Matrix& pair_weights,
                               double eps) {
  return stress_impl(coefficients, design, target, &pair_weights, eps);
}

double smoothed_risk(const Model& h, const SampleMatrix& sample, const DistanceMatrix& target,
                     double eps) {
  return stress_impl(coefficients(h), design_matrix(h, sample.values()), target, nullptr, eps)
      .value;
}

Matrix risk_gradient(const Model& h, const SampleMatrix& sample, const DistanceMatrix& target,
                     double eps) {
  return stress_impl(coefficients(h), design_matrix(h, sample.values()), target, nullptr, eps)
      .gradient;
}

double objective(const Model& h, const SampleMatrix& sample, const DistanceMatrix& target,
                 double penalty_lambda, double eps) {
  if (!(penalty_lambda >= 0.0)) {
    throw ValidationError("objective: penalty_lambda must be >= 0");
  }
  const double risk = smoothed_risk(h, sample, target, eps);
  return penalty_lambda == 0.0 ? risk : risk + penalty_lambda * model_norm(h);
}

Matrix norm_subgradient(const Model& h) {
  if (const auto* l = std::get_if<LinearMap>(&h)) {
    Eigen::JacobiSVD<Matrix> svd(l->weights(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(0) == 0.0) {
      return Matrix::Zero(l->weights().rows(), l->weights().cols());
    }
    return svd.matrixU().col(0) * svd.matrixV().col(0).transpose();
  }
  const auto& k = std::get<KernelMap>(h);
  const double norm = model_norm(k);
  if (norm == 0.0) {
    return Matrix::Zero(k.coefficients().rows(), k.coefficients().cols());
  }
  return k.coefficients() * k.anchor_gram().values() / norm;
}

Model initial_model(const SampleMatrix& sample, const HypothesisClass& cls,
                    std::uint64_t seed) {
  if (const auto* lc = std::get_if<LinearClass>(&cls)) {
    const Eigen::Index k = resolve_output_dim(lc->output_dim, sample);
    return project_norm_ball(LinearMap(uniform_matrix(k, sample.cols(), seed), lc->lambda_cap));
  }
  const auto& kc = std::get<KernelClass>(cls);
  const Eigen::Index k = resolve_output_dim(kc.output_dim, sample);
  return project_norm_ball(
      KernelMap(uniform_matrix(k, sample.rows(), seed), sample, kc.kernel, kc.lambda_cap));
}

TrainResult train(const SampleMatrix& sample, const DistanceMatrix& target,
                  const HypothesisClass& cls, const TrainConfig& cfg) {
  cfg.validate();
  if (target.size() != sample.rows()) {
    throw ValidationError("train: sample has " + std::to_string(sample.rows()) +
                          " points, distance matrix has " + std::to_string(target.size()));
  }
  if (const auto* kc = std::get_if<KernelClass>(&cls)) {
    const PsdCheck psd = psd_check(gram(kc->kernel, sample), kPsdTol);
    if (!psd.passed) {
      throw ValidationError("train: Gram matrix is not PSD (min eigenvalue " +
                            std::to_string(psd.min_eigenvalue) + ")");
    }
  }
  return train_from(sample, target, initial_model(sample, cls, cfg.seed), cfg);
}

TrainResult train_from(const SampleMatrix& sample, const DistanceMatrix& target, Model init,
                       const TrainConfig& cfg) {
  cfg.validate();
  if (target.size() != sample.rows()) {
    throw ValidationError("train: sample has " + std::to_string(sample.rows()) +
                          " points, distance matrix has " + std::to_string(target.size()));
  }

  Model model = std::move(init);
  const Matrix design = design_matrix(model, sample.values());
  TrainReport report;
  report.risk_trace.reserve(static_cast<std::size_t>(cfg.max_iters));

  for (int it = 0; it < cfg.max_iters; ++it) {
    WeightedStress ws;
    try {
      ws = stress_impl(coefficients(model), design, target, nullptr, cfg.smoothing_eps);
    } catch (const NumericalError&) {
      report.diverged = true;
      break;
    }
    report.risk_trace.push_back(ws.value);
    if (ws.value > kDivergenceRisk) {
      report.diverged = true;
      break;
    }

    Matrix direction = std::move(ws.gradient);
    if (cfg.penalty_lambda > 0.0) {
      direction += cfg.penalty_lambda * norm_subgradient(model);
    }
    Model next = project_norm_ball(
        with_coefficients(model, coefficients(model) - cfg.step_size * direction));

    // Gradient mapping; equals the plain gradient norm away from the boundary.
    const double step_norm = (coefficients(model) - coefficients(next)).norm() / cfg.step_size;
    if (step_norm < cfg.grad_tol) {
      report.converged = true;
      break;
    }
    model = std::move(next);
    ++report.iterations_used;
  }

  try {
    report.final_risk = empirical_risk(embedding_distance_matrix(model, sample), target);
    report.final_model_norm = model_norm(model);
  } catch (const NumericalError&) {
    report.final_risk = std::numeric_limits<double>::infinity();
    report.final_model_norm = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(report.final_risk) || report.final_risk > kDivergenceRisk) {
    report.diverged = true;
    report.converged = false;
  }
  return {std::move(model), std::move(report)};
}

}  // namespace simlearn
