#include "simlearn/kernels.hpp"

#include <cmath>
#include <string>

namespace simlearn {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::linear:
      return "linear";
    case KernelFamily::rbf:
      return "rbf";
    case KernelFamily::polynomial:
      return "polynomial";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "linear") return KernelFamily::linear;
  if (name == "rbf") return KernelFamily::rbf;
  if (name == "polynomial" || name == "poly") return KernelFamily::polynomial;
  throw ValidationError("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("KernelSpec: gamma must be a finite value > 0");
  }
  if (degree < 1) {
    throw ValidationError("KernelSpec: degree must be >= 1");
  }
  if (!(coef0 >= 0.0) || !std::isfinite(coef0)) {
    throw ValidationError("KernelSpec: coef0 must be a finite value >= 0");
  }
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size()) {
    throw ValidationError("kernel_eval: dimension mismatch " + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()));
  }
  switch (spec.family) {
    case KernelFamily::linear:
      return x.dot(y);
    case KernelFamily::rbf:
      return std::exp(-spec.gamma * (x - y).squaredNorm());
    case KernelFamily::polynomial:
      return std::pow(x.dot(y) + spec.coef0, spec.degree);
  }
  throw ValidationError("kernel_eval: bad kernel family");
}

GramMatrix::GramMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw ValidationError("GramMatrix: not square");
  }
  if (!values_.allFinite()) {
    throw ValidationError("GramMatrix: non-finite entry");
  }
  if (values_ != values_.transpose()) {
    throw ValidationError("GramMatrix: not exactly symmetric");
  }
  if ((values_.diagonal().array() < 0.0).any()) {
    throw ValidationError("GramMatrix: negative diagonal entry");
  }
}

GramMatrix gram(const KernelSpec& spec, const SampleMatrix& sample) {
  spec.validate();
  const Matrix& x = sample.values();
  const Eigen::Index m = x.rows();
  Matrix k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    // RBF self-similarity is exactly 1; don't let exp(-0 * gamma) round.
    k(i, i) = spec.family == KernelFamily::rbf ? 1.0
                                               : kernel_eval(spec, x.row(i).transpose(),
                                                             x.row(i).transpose());
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = kernel_eval(spec, x.row(i).transpose(), x.row(j).transpose());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return GramMatrix(std::move(k));
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& points, const Matrix& anchors) {
  spec.validate();
  if (points.cols() != anchors.cols()) {
    throw ValidationError("cross_gram: points have " + std::to_string(points.cols()) +
                          " features, anchors have " + std::to_string(anchors.cols()));
  }
  Matrix k(points.rows(), anchors.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < anchors.rows(); ++j) {
      k(i, j) = kernel_eval(spec, points.row(i).transpose(), anchors.row(j).transpose());
    }
  }
  return k;
}

PsdCheck psd_check(const GramMatrix& gram, double tol) {
  PsdCheck result;
  if (gram.size() == 0) {
    result.passed = true;
    return result;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram.values(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("psd_check: eigenvalue decomposition failed");
  }
  const Vector& eig = solver.eigenvalues();
  result.min_eigenvalue = eig.minCoeff();
  result.max_abs_eigenvalue = eig.cwiseAbs().maxCoeff();
  result.passed = result.min_eigenvalue >= -tol * std::max(result.max_abs_eigenvalue, 1.0);
  return result;
}

double feature_space_radius(const GramMatrix& gram) {
  if (gram.size() == 0) return 0.0;
  return std::sqrt(gram.values().diagonal().maxCoeff());
}

}  // namespace simlearn
