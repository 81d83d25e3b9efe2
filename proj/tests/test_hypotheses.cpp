#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "simlearn/hypotheses.hpp"

using namespace simlearn;

namespace {

Matrix column(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

// Coefficients A with A X = W, so the linear-kernel map A k_S(x) = A X x = W x.
KernelMap equivalent_kernel_map(const LinearMap& lin, const Matrix& x) {
  const Matrix pinv = x.completeOrthogonalDecomposition().pseudoInverse();  // N x m
  return KernelMap(lin.weights() * pinv, SampleMatrix(x), KernelSpec::linear(), lin.lambda_cap());
}

}  // namespace

TEST_CASE("linear_forward") {
  const Vector x = (Vector(2) << 3, 4).finished();
  CHECK(linear_forward(LinearMap(Matrix::Identity(2, 2), 1.0), x) == x);
  const Vector y = (Vector(2) << 1, 5).finished();
  CHECK(linear_forward(LinearMap((Matrix(1, 2) << 2, 0).finished(), 2.0), y)(0) == 2.0);
  CHECK(linear_forward(LinearMap(Matrix::Zero(3, 2), 1.0), x).isZero(0.0));
  CHECK_THROWS_AS(linear_forward(LinearMap(Matrix::Identity(2, 2), 1.0), Vector::Zero(3)),
                  ValidationError);
}

TEST_CASE("kernel_forward") {
  // Linear kernel, anchor x1 = 2 with weight 3 (the second anchor carries weight 0):
  // h(x) = 3 * 2 * x.
  const KernelMap h((Matrix(1, 2) << 3, 0).finished(), SampleMatrix(column({2, 5})),
                    KernelSpec::linear(), 10.0);
  CHECK(kernel_forward(h, Vector::Constant(1, 1.0))(0) == 6.0);

  const KernelMap zero(Matrix::Zero(2, 2), SampleMatrix(column({2, 5})), KernelSpec::rbf(1.0), 1.0);
  CHECK(kernel_forward(zero, Vector::Constant(1, 0.3)).isZero(0.0));

  std::mt19937_64 rng(41);
  const Matrix anchors = oracle::random_matrix(5, 3, rng);
  for (Eigen::Index j = 0; j < 5; ++j) {
    Matrix a = Matrix::Zero(1, 5);
    a(0, j) = 1.0;
    const KernelMap pick(a, SampleMatrix(anchors), KernelSpec::rbf(0.8), 1.0);
    CHECK(kernel_forward(pick, anchors.row(j).transpose())(0) == 1.0);
  }
  CHECK_THROWS_AS(kernel_forward(zero, Vector::Zero(2)), ValidationError);
}

TEST_CASE("embedding_distance_matrix") {
  std::mt19937_64 rng(43);
  const Matrix x = oracle::random_matrix(6, 3, rng);
  const SampleMatrix s(x);
  const Model id = LinearMap(Matrix::Identity(3, 3), 1.0);
  const Matrix d = embedding_distance_matrix(id, s);
  CHECK(d == pairwise_distances(x));
  CHECK(d.diagonal().isZero(0.0));

  const Model kern = KernelMap(oracle::random_matrix(2, 6, rng), s, KernelSpec::rbf(1.0), 5.0);
  CHECK(embedding_distance_matrix(kern, s).diagonal().isZero(0.0));
}

TEST_CASE("linear-kernel map reproduces the equivalent linear map") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = oracle::random_matrix(4, 2, rng);
    const LinearMap lin(oracle::random_matrix(2, 2, rng), 3.0);
    const KernelMap ker = equivalent_kernel_map(lin, x);
    const Matrix dl = embedding_distance_matrix(Model(lin), SampleMatrix(x));
    const Matrix dk = embedding_distance_matrix(Model(ker), SampleMatrix(x));
    CHECK((dl - dk).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("Gram-side and explicit-feature distances agree for the linear kernel") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = oracle::random_matrix(7, 3, rng);
    const Matrix a = oracle::random_matrix(2, 7, rng);
    const KernelMap ker(a, SampleMatrix(x), KernelSpec::linear(), 10.0);
    // Explicit feature map is the identity: h(x) = (A X) x.
    const Matrix explicit_d = pairwise_distances(x * (a * x).transpose());
    CHECK((anchor_distance_matrix(ker) - explicit_d).cwiseAbs().maxCoeff() <= 1e-9);

    // A sample that differs from the anchors goes through kernel evaluation.
    const Matrix fresh = oracle::random_matrix(5, 3, rng);
    const Matrix via_kernel = embedding_distance_matrix(Model(ker), SampleMatrix(fresh));
    CHECK((via_kernel - pairwise_distances(fresh * (a * x).transpose())).cwiseAbs().maxCoeff() <=
          1e-9);
  }
}

TEST_CASE("model_norm") {
  CHECK(model_norm(LinearMap((Matrix(2, 2) << 2, 0, 0, 0.5).finished(), 1.0)) ==
        doctest::Approx(2.0).epsilon(1e-15));
  const KernelMap k((Matrix(1, 2) << 3, 0).finished(), SampleMatrix(column({2, 5})),
                    KernelSpec::linear(), 1.0);
  CHECK(model_norm(k) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(model_norm(LinearMap(Matrix::Zero(2, 3), 1.0)) == 0.0);
  CHECK(model_norm(KernelMap(Matrix::Zero(2, 2), SampleMatrix(column({2, 5})),
                             KernelSpec::rbf(1.0), 1.0)) == 0.0);
}

TEST_CASE("project_norm_ball") {
  SUBCASE("diagonal linear map has its singular values clipped") {
    const LinearMap h((Matrix(2, 2) << 2, 0, 0, 0.5).finished(), 1.0);
    const LinearMap p = project_norm_ball(h);
    CHECK(p.weights().isApprox((Matrix(2, 2) << 1, 0, 0, 0.5).finished(), 1e-14));
  }
  SUBCASE("interior points are unchanged") {
    const LinearMap h((Matrix(2, 2) << 0.5, 0, 0, 0.1).finished(), 1.0);
    CHECK(project_norm_ball(h).weights() == h.weights());
    const KernelMap k((Matrix(1, 2) << 3, 0).finished(), SampleMatrix(column({2, 5})),
                      KernelSpec::linear(), 12.0);
    CHECK(project_norm_ball(k).coefficients() == k.coefficients());
  }
  SUBCASE("kernel map with norm 6 and cap 3 is halved") {
    const KernelMap k((Matrix(1, 2) << 3, 0).finished(), SampleMatrix(column({2, 5})),
                      KernelSpec::linear(), 3.0);
    const KernelMap p = project_norm_ball(k);
    CHECK(p.coefficients().isApprox((Matrix(1, 2) << 1.5, 0).finished(), 1e-15));
    CHECK(model_norm(p) == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("zero cap collapses to the zero map") {
    const LinearMap h(Matrix::Ones(2, 2), 0.0);
    CHECK(project_norm_ball(h).weights().isZero(1e-15));
  }
  SUBCASE("non-finite weights fail") {
    Matrix w = Matrix::Identity(2, 2);
    w(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(project_norm_ball(LinearMap(w, 1.0)), NumericalError);
  }
}

TEST_CASE("projection properties on random maps") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> cap(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = cap(rng);
    const Matrix x = oracle::random_matrix(6, 3, rng);
    const Model lin = LinearMap(oracle::random_matrix(2, 3, rng, -3, 3), lambda);
    const Model ker = KernelMap(oracle::random_matrix(2, 6, rng, -3, 3), SampleMatrix(x),
                                KernelSpec::rbf(0.7), lambda);
    for (const Model& h : {lin, ker}) {
      const Model once = project_norm_ball(h);
      const Model twice = project_norm_ball(once);
      CHECK(model_norm(once) <= lambda + 1e-9);
      CHECK((coefficients(once) - coefficients(twice)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("norm-bounded linear maps contract distances by at most lambda") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = 0.5 + 0.05 * trial;
    const Matrix x = oracle::random_matrix(8, 3, rng, -2, 2);
    const LinearMap h = project_norm_ball(LinearMap(oracle::random_matrix(3, 3, rng, -4, 4), lambda));
    const Matrix dh = embedding_distance_matrix(Model(h), SampleMatrix(x));
    const Matrix dx = pairwise_distances(x);
    CHECK((dh.array() <= lambda * dx.array() + 1e-12).all());
  }
}
