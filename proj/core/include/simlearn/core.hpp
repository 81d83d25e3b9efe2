#pragma once

#include <Eigen/Dense>

#include "simlearn/errors.hpp"

namespace simlearn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// m feature vectors in R^N, one per row. Requires m >= 2, N >= 1 and
/// finite entries.
class SampleMatrix {
 public:
  explicit SampleMatrix(Matrix values);

  [[nodiscard]] Eigen::Index rows() const { return values_.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return values_.cols(); }
  [[nodiscard]] const Matrix& values() const { return values_; }
  [[nodiscard]] auto row(Eigen::Index i) const { return values_.row(i); }

 private:
  Matrix values_;
};

/// Symmetric, nonnegative, zero-diagonal m x m target distances. The
/// triangle inequality is not required. Construct through
/// validate_distance_matrix().
class DistanceMatrix {
 public:
  [[nodiscard]] Eigen::Index size() const { return values_.rows(); }
  [[nodiscard]] const Matrix& values() const { return values_; }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const {
    return values_(i, j);
  }

 private:
  friend DistanceMatrix validate_distance_matrix(const Matrix& mat, double tol);
  explicit DistanceMatrix(Matrix values) : values_(std::move(values)) {}

  Matrix values_;
};

/// Pairwise confusion rates in [0, 1] with unit diagonal.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(Matrix values);

  [[nodiscard]] Eigen::Index size() const { return values_.rows(); }
  [[nodiscard]] const Matrix& values() const { return values_; }

 private:
  Matrix values_;
};

struct DataRadii {
  double r = 0.0;     // max feature norm
  double beta = 0.0;  // max target distance
};

/// Validates a candidate distance matrix.
///
/// Asymmetry up to `tol` is removed by averaging with the transpose,
/// diagonal entries within `tol` of zero are set to zero, and negative
/// entries within `tol` are clamped to zero. Anything beyond `tol`, or a
/// non-finite entry, throws ValidationError.
DistanceMatrix validate_distance_matrix(const Matrix& mat, double tol = 0.0);

/// D_ij = 1 - C_ij. Throws ValidationError if the result is not a valid
/// distance matrix at tolerance 0 (e.g. C is asymmetric).
DistanceMatrix confusion_to_distance(const ConfusionMatrix& confusion);

/// Euclidean distances between the rows of `points`. The output is exactly
/// symmetric with an exact zero diagonal.
Matrix pairwise_distances(const Matrix& points);

/// (1/m^2) * sum_ij (D_hat_ij - D_ij)^2, diagonal included.
double empirical_risk(const Matrix& predicted, const DistanceMatrix& target);

DataRadii data_radii(const SampleMatrix& sample, const DistanceMatrix& target);

}  // namespace simlearn
