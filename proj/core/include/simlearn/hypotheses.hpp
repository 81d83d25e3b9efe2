#pragma once

#include <memory>
#include <variant>

#include "simlearn/core.hpp"
#include "simlearn/kernels.hpp"

namespace simlearn {

/// h(x) = W x with W of shape k x N. The class constraint is the spectral
/// norm bound |W|_2 <= lambda_cap, enforced by project_norm_ball().
class LinearMap {
 public:
  LinearMap(Matrix weights, double lambda_cap);

  [[nodiscard]] const Matrix& weights() const { return weights_; }
  [[nodiscard]] double lambda_cap() const { return lambda_cap_; }
  [[nodiscard]] Eigen::Index output_dim() const { return weights_.rows(); }
  [[nodiscard]] Eigen::Index input_dim() const { return weights_.cols(); }

  [[nodiscard]] LinearMap with_weights(Matrix weights) const {
    return LinearMap(std::move(weights), lambda_cap_);
  }

 private:
  Matrix weights_;
  double lambda_cap_;
};

/// Representer-form kernel map h(x) = A k_S(x), where k_S(x) is the column
/// of kernel values K(anchor_j, x) and A has shape k x m. The RKHS norm is
/// sqrt(trace(A K A^T)) with K the Gram matrix of the anchors.
///
/// Anchors and their Gram matrix are shared between copies, so
/// with_coefficients() does not recompute K.
class KernelMap {
 public:
  KernelMap(Matrix coefficients, SampleMatrix anchors, KernelSpec kernel, double lambda_cap);

  [[nodiscard]] const Matrix& coefficients() const { return coefficients_; }
  [[nodiscard]] const SampleMatrix& anchors() const { return shared_->anchors; }
  [[nodiscard]] const GramMatrix& anchor_gram() const { return shared_->gram; }
  [[nodiscard]] const KernelSpec& kernel() const { return shared_->kernel; }
  [[nodiscard]] double lambda_cap() const { return lambda_cap_; }
  [[nodiscard]] Eigen::Index output_dim() const { return coefficients_.rows(); }
  [[nodiscard]] Eigen::Index input_dim() const { return anchors().cols(); }

  [[nodiscard]] KernelMap with_coefficients(Matrix coefficients) const;

 private:
  struct Shared {
    SampleMatrix anchors;
    KernelSpec kernel;
    GramMatrix gram;
  };

  KernelMap(Matrix coefficients, std::shared_ptr<const Shared> shared, double lambda_cap);

  Matrix coefficients_;
  std::shared_ptr<const Shared> shared_;
  double lambda_cap_;
};

using Model = std::variant<LinearMap, KernelMap>;

Vector linear_forward(const LinearMap& h, const Eigen::Ref<const Vector>& x);
Vector kernel_forward(const KernelMap& h, const Eigen::Ref<const Vector>& x);
Vector forward(const Model& h, const Eigen::Ref<const Vector>& x);

/// Rows that the model's coefficient matrix acts on: the raw features for a
/// LinearMap, the kernel columns against the anchors for a KernelMap. The
/// embedding of the sample is design_matrix(h, S) * coefficients^T.
Matrix design_matrix(const Model& h, const Matrix& points);

/// W for a LinearMap, A for a KernelMap.
const Matrix& coefficients(const Model& h);
Model with_coefficients(const Model& h, Matrix coefficients);
double lambda_cap(const Model& h);

/// D_hat_ij = |h(x_i) - h(x_j)|_2. A KernelMap evaluated on its own anchors
/// uses the cached Gram matrix instead of re-evaluating the kernel.
Matrix embedding_distance_matrix(const Model& h, const SampleMatrix& sample);

/// Gram-side distances on the anchors: |A (k_i - k_j)|_2 with k_i the i-th
/// Gram column.
Matrix anchor_distance_matrix(const KernelMap& h);

/// Spectral norm of W, or sqrt(trace(A K A^T)) for a kernel map.
double model_norm(const LinearMap& h);
double model_norm(const KernelMap& h);
double model_norm(const Model& h);

/// Maps h into the ball {model_norm <= lambda_cap}. Linear maps have their
/// singular values clipped at lambda_cap; kernel maps have A rescaled.
/// Maps already inside the ball are returned unchanged.
LinearMap project_norm_ball(const LinearMap& h);
KernelMap project_norm_ball(const KernelMap& h);
Model project_norm_ball(const Model& h);

}  // namespace simlearn
