#include "simlearn/core.hpp"

#include <cmath>
#include <string>

namespace simlearn {

namespace {

void require_finite(const Matrix& mat, const char* what) {
  if (!mat.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

void require_square(const Matrix& mat, const char* what) {
  if (mat.rows() != mat.cols()) {
    throw ValidationError(std::string(what) + ": matrix is " + std::to_string(mat.rows()) +
                          "x" + std::to_string(mat.cols()) + ", expected square");
  }
}

}  // namespace

SampleMatrix::SampleMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 2) {
    throw ValidationError("SampleMatrix: need at least 2 rows, got " +
                          std::to_string(values_.rows()));
  }
  if (values_.cols() < 1) {
    throw ValidationError("SampleMatrix: need at least 1 column");
  }
  require_finite(values_, "SampleMatrix");
}

ConfusionMatrix::ConfusionMatrix(Matrix values) : values_(std::move(values)) {
  require_square(values_, "ConfusionMatrix");
  require_finite(values_, "ConfusionMatrix");
  if ((values_.array() < 0.0).any() || (values_.array() > 1.0).any()) {
    throw ValidationError("ConfusionMatrix: entries must lie in [0, 1]");
  }
  if ((values_.diagonal().array() != 1.0).any()) {
    throw ValidationError("ConfusionMatrix: diagonal must be exactly 1");
  }
}

DistanceMatrix validate_distance_matrix(const Matrix& mat, double tol) {
  if (!(tol >= 0.0)) {
    throw ValidationError("validate_distance_matrix: tol must be >= 0");
  }
  require_square(mat, "DistanceMatrix");
  require_finite(mat, "DistanceMatrix");

  const Eigen::Index m = mat.rows();
  Matrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double diag = mat(i, i);
    if (std::abs(diag) > tol) {
      throw ValidationError("DistanceMatrix: diagonal entry " + std::to_string(i) + " is " +
                            std::to_string(diag));
    }
    out(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double a = mat(i, j);
      const double b = mat(j, i);
      const double asym = std::abs(a - b);
      if (asym > tol) {
        throw ValidationError("DistanceMatrix: asymmetry " + std::to_string(asym) + " at (" +
                              std::to_string(i) + "," + std::to_string(j) + ") exceeds tol");
      }
      double v = a == b ? a : 0.5 * (a + b);
      if (v < 0.0) {
        if (-v > tol) {
          throw ValidationError("DistanceMatrix: negative entry at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
        }
        v = 0.0;
      }
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return DistanceMatrix(std::move(out));
}

DistanceMatrix confusion_to_distance(const ConfusionMatrix& confusion) {
  const Matrix d = Matrix::Ones(confusion.size(), confusion.size()) - confusion.values();
  return validate_distance_matrix(d, 0.0);
}

Matrix pairwise_distances(const Matrix& points) {
  require_finite(points, "pairwise_distances");
  const Eigen::Index m = points.rows();
  Matrix out = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

double empirical_risk(const Matrix& predicted, const DistanceMatrix& target) {
  if (predicted.rows() != target.size() || predicted.cols() != target.size()) {
    throw ValidationError("empirical_risk: predicted is " + std::to_string(predicted.rows()) +
                          "x" + std::to_string(predicted.cols()) + ", target is " +
                          std::to_string(target.size()) + "x" + std::to_string(target.size()));
  }
  const auto m = static_cast<double>(target.size());
  return (predicted - target.values()).squaredNorm() / (m * m);
}

DataRadii data_radii(const SampleMatrix& sample, const DistanceMatrix& target) {
  DataRadii radii;
  radii.r = sample.values().rowwise().norm().maxCoeff();
  radii.beta = target.size() > 0 ? target.values().maxCoeff() : 0.0;
  return radii;
}

}  // namespace simlearn
