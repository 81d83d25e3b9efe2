#pragma once

#include <string>
#include <string_view>

#include "simlearn/core.hpp"

namespace simlearn {

enum class KernelFamily { linear, rbf, polynomial };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// linear:     x . y
/// rbf:        exp(-gamma * |x - y|^2)
/// polynomial: (x . y + coef0)^degree
struct KernelSpec {
  KernelFamily family = KernelFamily::rbf;
  double gamma = 1.0;
  int degree = 2;
  double coef0 = 1.0;

  /// Throws ValidationError unless gamma > 0, degree >= 1, coef0 >= 0.
  void validate() const;

  static KernelSpec linear() { return {KernelFamily::linear, 1.0, 1, 0.0}; }
  static KernelSpec rbf(double gamma) { return {KernelFamily::rbf, gamma, 2, 1.0}; }
  static KernelSpec polynomial(int degree, double coef0) {
    return {KernelFamily::polynomial, 1.0, degree, coef0};
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y);

/// Symmetric m x m matrix of kernel evaluations on a sample.
class GramMatrix {
 public:
  /// Throws ValidationError if `values` is not square, exactly symmetric,
  /// finite, or has a negative diagonal entry.
  explicit GramMatrix(Matrix values);

  [[nodiscard]] Eigen::Index size() const { return values_.rows(); }
  [[nodiscard]] const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

/// Each unordered pair is evaluated once and mirrored, so the result is
/// exactly symmetric.
GramMatrix gram(const KernelSpec& spec, const SampleMatrix& sample);

/// Matrix of K(points_i, anchors_j), shape points.rows() x anchors.rows().
Matrix cross_gram(const KernelSpec& spec, const Matrix& points, const Matrix& anchors);

struct PsdCheck {
  bool passed = false;
  double min_eigenvalue = 0.0;
  double max_abs_eigenvalue = 0.0;
};

/// Passes iff min eigenvalue >= -tol * max(max |eigenvalue|, 1).
PsdCheck psd_check(const GramMatrix& gram, double tol);

/// q = max_i sqrt(K_ii).
double feature_space_radius(const GramMatrix& gram);

}  // namespace simlearn
