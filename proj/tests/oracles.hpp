#pragma once

// Test-only reference computations. Everything here is written with plain
// loops over std::vector so it shares no code path with the library.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline Rows to_rows(const Eigen::MatrixXd& m) {
  Rows out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// y = C f for a k x p coefficient matrix and a p-vector.
inline std::vector<double> apply(const Rows& c, const std::vector<double>& f) {
  std::vector<double> y(c.size());
  for (std::size_t r = 0; r < c.size(); ++r) y[r] = dot(c[r], f);
  return y;
}

// (1/m^2) sum_ij w_ij (sqrt(|C f_i - C f_j|^2 + eps^2) - D_ij)^2, where f_i
// are the design rows (raw features or kernel columns).
inline double stress(const Rows& coeffs, const Rows& design, const Rows& target, double eps,
                     const Rows* weights = nullptr) {
  const std::size_t m = design.size();
  std::vector<std::vector<double>> emb(m);
  for (std::size_t i = 0; i < m; ++i) emb[i] = apply(coeffs, design[i]);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double sq = 0.0;
      for (std::size_t r = 0; r < emb[i].size(); ++r) sq += (emb[i][r] - emb[j][r]) * (emb[i][r] - emb[j][r]);
      const double d = std::sqrt(sq + eps * eps);
      const double w = weights ? (*weights)[i][j] : 1.0;
      total += w * (d - target[i][j]) * (d - target[i][j]);
    }
  }
  return total / static_cast<double>(m * m);
}

inline double rbf(const std::vector<double>& a, const std::vector<double>& b, double gamma) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-gamma * sq);
}

inline Rows rbf_gram(const Rows& x, double gamma) {
  Rows k(x.size(), std::vector<double>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) k[i][j] = rbf(x[i], x[j], gamma);
  return k;
}

// Central finite differences of f with respect to every entry of c.
inline Rows central_difference(const std::function<double(const Rows&)>& f, Rows c, double h) {
  Rows g(c.size(), std::vector<double>(c.empty() ? 0 : c[0].size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c[i].size(); ++j) {
      const double saved = c[i][j];
      c[i][j] = saved + h;
      const double up = f(c);
      c[i][j] = saved - h;
      const double down = f(c);
      c[i][j] = saved;
      g[i][j] = (up - down) / (2.0 * h);
    }
  }
  return g;
}

// |a - b|_F / max(|a|_F, |b|_F, floor)
inline double relative_error(const Rows& a, const Eigen::MatrixXd& b, double floor = 1e-12) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      const double bv = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      diff += (a[i][j] - bv) * (a[i][j] - bv);
      na += a[i][j] * a[i][j];
      nb += bv * bv;
    }
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), floor});
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                                     double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

// Symmetric, nonnegative, zero-diagonal matrix with entries in [0, hi).
inline Eigen::MatrixXd random_distances(Eigen::Index m, std::mt19937_64& rng, double hi = 2.0) {
  std::uniform_real_distribution<double> u(0.0, hi);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) d(i, j) = d(j, i) = u(rng);
  return d;
}

}  // namespace oracle
