#include "simlearn/hypotheses.hpp"

#include <cmath>
#include <string>

namespace simlearn {

namespace {

void check_cap(double lambda_cap) {
  if (!(lambda_cap >= 0.0) || !std::isfinite(lambda_cap)) {
    throw ValidationError("lambda_cap must be finite and >= 0");
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

LinearMap::LinearMap(Matrix weights, double lambda_cap)
    : weights_(std::move(weights)), lambda_cap_(lambda_cap) {
  check_cap(lambda_cap_);
  if (weights_.rows() < 1 || weights_.cols() < 1) {
    throw ValidationError("LinearMap: weight matrix must be non-empty");
  }
}

KernelMap::KernelMap(Matrix coefficients, SampleMatrix anchors, KernelSpec kernel,
                     double lambda_cap)
    : coefficients_(std::move(coefficients)), lambda_cap_(lambda_cap) {
  check_cap(lambda_cap_);
  kernel.validate();
  if (coefficients_.rows() < 1 || coefficients_.cols() != anchors.rows()) {
    throw ValidationError("KernelMap: coefficient matrix must be k x m with m = " +
                          std::to_string(anchors.rows()) + " anchors");
  }
  GramMatrix k = gram(kernel, anchors);
  shared_ = std::make_shared<const Shared>(Shared{std::move(anchors), kernel, std::move(k)});
}

KernelMap::KernelMap(Matrix coefficients, std::shared_ptr<const Shared> shared,
                     double lambda_cap)
    : coefficients_(std::move(coefficients)), shared_(std::move(shared)), lambda_cap_(lambda_cap) {}

KernelMap KernelMap::with_coefficients(Matrix coefficients) const {
  if (coefficients.rows() < 1 || coefficients.cols() != anchors().rows()) {
    throw ValidationError("KernelMap: coefficient matrix has wrong shape");
  }
  return KernelMap(std::move(coefficients), shared_, lambda_cap_);
}

Vector linear_forward(const LinearMap& h, const Eigen::Ref<const Vector>& x) {
  if (x.size() != h.input_dim()) {
    throw ValidationError("linear_forward: expected " + std::to_string(h.input_dim()) +
                          " features, got " + std::to_string(x.size()));
  }
  return h.weights() * x;
}

Vector kernel_forward(const KernelMap& h, const Eigen::Ref<const Vector>& x) {
  if (x.size() != h.input_dim()) {
    throw ValidationError("kernel_forward: expected " + std::to_string(h.input_dim()) +
                          " features, got " + std::to_string(x.size()));
  }
  const Matrix& anchors = h.anchors().values();
  Vector column(anchors.rows());
  for (Eigen::Index j = 0; j < anchors.rows(); ++j) {
    column(j) = kernel_eval(h.kernel(), anchors.row(j).transpose(), x);
  }
  return h.coefficients() * column;
}

Vector forward(const Model& h, const Eigen::Ref<const Vector>& x) {
  return std::visit(overloaded{[&](const LinearMap& l) { return linear_forward(l, x); },
                               [&](const KernelMap& k) { return kernel_forward(k, x); }},
                    h);
}

Matrix design_matrix(const Model& h, const Matrix& points) {
  return std::visit(
      overloaded{[&](const LinearMap& l) -> Matrix {
                   if (points.cols() != l.input_dim()) {
                     throw ValidationError("design_matrix: feature dimension mismatch");
                   }
                   return points;
                 },
                 [&](const KernelMap& k) -> Matrix {
                   if (points.rows() == k.anchors().rows() && points == k.anchors().values()) {
                     return k.anchor_gram().values();
                   }
                   return cross_gram(k.kernel(), points, k.anchors().values());
                 }},
      h);
}

const Matrix& coefficients(const Model& h) {
  return std::visit(overloaded{[](const LinearMap& l) -> const Matrix& { return l.weights(); },
                               [](const KernelMap& k) -> const Matrix& {
                                 return k.coefficients();
                               }},
                    h);
}

Model with_coefficients(const Model& h, Matrix coefficients) {
  return std::visit(
      overloaded{[&](const LinearMap& l) -> Model { return l.with_weights(std::move(coefficients)); },
                 [&](const KernelMap& k) -> Model {
                   return k.with_coefficients(std::move(coefficients));
                 }},
      h);
}

double lambda_cap(const Model& h) {
  return std::visit([](const auto& m) { return m.lambda_cap(); }, h);
}

Matrix embedding_distance_matrix(const Model& h, const SampleMatrix& sample) {
  if (const auto* k = std::get_if<KernelMap>(&h);
      k != nullptr && sample.rows() == k->anchors().rows() &&
      sample.values() == k->anchors().values()) {
    return anchor_distance_matrix(*k);
  }
  const Matrix embedding = design_matrix(h, sample.values()) * coefficients(h).transpose();
  if (!embedding.allFinite()) {
    throw NumericalError("embedding_distance_matrix: non-finite embedding");
  }
  return pairwise_distances(embedding);
}

Matrix anchor_distance_matrix(const KernelMap& h) {
  const Matrix& k = h.anchor_gram().values();
  const Matrix& a = h.coefficients();
  const Eigen::Index m = k.rows();
  Matrix out = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const Vector diff = a * (k.col(i) - k.col(j));
      const double d = std::sqrt(std::max(diff.squaredNorm(), 0.0));
      if (!std::isfinite(d)) {
        throw NumericalError("anchor_distance_matrix: non-finite distance");
      }
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

double model_norm(const LinearMap& h) {
  if (!h.weights().allFinite()) {
    throw NumericalError("model_norm: non-finite weights");
  }
  Eigen::JacobiSVD<Matrix> svd(h.weights());
  return svd.singularValues()(0);
}

double model_norm(const KernelMap& h) {
  const Matrix& a = h.coefficients();
  const double trace = (a * h.anchor_gram().values()).cwiseProduct(a).sum();
  return std::sqrt(std::max(trace, 0.0));
}

double model_norm(const Model& h) {
  return std::visit([](const auto& m) { return model_norm(m); }, h);
}

LinearMap project_norm_ball(const LinearMap& h) {
  if (!h.weights().allFinite()) {
    throw NumericalError("project_norm_ball: non-finite weights");
  }
  Eigen::JacobiSVD<Matrix> svd(h.weights(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s(0) <= h.lambda_cap()) {
    return h;
  }
  const Vector clipped = s.cwiseMin(h.lambda_cap());
  return h.with_weights(svd.matrixU() * clipped.asDiagonal() * svd.matrixV().transpose());
}

KernelMap project_norm_ball(const KernelMap& h) {
  const double norm = model_norm(h);
  if (!std::isfinite(norm)) {
    throw NumericalError("project_norm_ball: non-finite coefficients");
  }
  if (norm <= h.lambda_cap()) {
    return h;
  }
  return h.with_coefficients(h.coefficients() * (h.lambda_cap() / norm));
}

Model project_norm_ball(const Model& h) {
  return std::visit([](const auto& m) -> Model { return project_norm_ball(m); }, h);
}

}  // namespace simlearn
