#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "simlearn/kernels.hpp"

using namespace simlearn;

TEST_CASE("kernel_eval reference values") {
  const Vector a = (Vector(2) << 1, 2).finished();
  const Vector b = (Vector(2) << 3, 4).finished();
  CHECK(kernel_eval(KernelSpec::rbf(0.7), a, a) == 1.0);
  CHECK(kernel_eval(KernelSpec::linear(), a, b) == 11.0);
  CHECK(kernel_eval(KernelSpec::rbf(0.5), a, b) == doctest::Approx(std::exp(-0.5 * 8.0)));

  // x . y = 2 with degree 2, coef0 = 1 gives (2 + 1)^2.
  const Vector x = (Vector(2) << 1, 1).finished();
  CHECK(kernel_eval(KernelSpec::polynomial(2, 1.0), x, x) == 9.0);

  CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), a, Vector::Zero(3)), ValidationError);
}

TEST_CASE("KernelSpec validation") {
  CHECK_THROWS_AS(KernelSpec::rbf(0.0).validate(), ValidationError);
  CHECK_THROWS_AS(KernelSpec::polynomial(0, 1.0).validate(), ValidationError);
  CHECK_THROWS_AS(KernelSpec::polynomial(2, -1.0).validate(), ValidationError);
  CHECK(kernel_family_from_string("poly") == KernelFamily::polynomial);
  CHECK_THROWS_AS(kernel_family_from_string("sigmoid"), ValidationError);
}

TEST_CASE("gram matrices") {
  std::mt19937_64 rng(17);
  const Matrix x = oracle::random_matrix(7, 3, rng);
  const SampleMatrix s(x);

  const GramMatrix rbf = gram(KernelSpec::rbf(2.0), s);
  CHECK(rbf.values().diagonal() == Vector::Ones(7));
  CHECK(rbf.values() == rbf.values().transpose());

  const GramMatrix lin = gram(KernelSpec::linear(), s);
  CHECK(lin.values().isApprox(x * x.transpose(), 1e-14));

  const GramMatrix same = gram(KernelSpec::rbf(1.0), SampleMatrix(Matrix::Ones(2, 3)));
  CHECK(same.values() == Matrix::Ones(2, 2));

  CHECK_THROWS_AS(GramMatrix((Matrix(2, 2) << 1, 0.5, 0.4, 1).finished()), ValidationError);
  CHECK_THROWS_AS(GramMatrix((Matrix(2, 2) << -1, 0, 0, 1).finished()), ValidationError);
}

TEST_CASE("psd_check") {
  const PsdCheck id = psd_check(GramMatrix(Matrix::Identity(2, 2)), 1e-10);
  CHECK(id.passed);
  CHECK(id.min_eigenvalue == doctest::Approx(1.0));

  // Eigenvalues of [[1,2],[2,1]] are 3 and -1.
  const PsdCheck bad = psd_check(GramMatrix((Matrix(2, 2) << 1, 2, 2, 1).finished()), 1e-10);
  CHECK_FALSE(bad.passed);
  CHECK(bad.min_eigenvalue == doctest::Approx(-1.0));
  CHECK(bad.max_abs_eigenvalue == doctest::Approx(3.0));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const SampleMatrix s(oracle::random_matrix(3 + trial, 2, rng, -2, 2));
    CHECK(psd_check(gram(KernelSpec::rbf(0.5 + trial * 0.1), s), 1e-10).passed);
    CHECK(psd_check(gram(KernelSpec::polynomial(3, 1.0), s), 1e-10).passed);
  }
}

TEST_CASE("feature_space_radius") {
  std::mt19937_64 rng(29);
  const SampleMatrix s(oracle::random_matrix(9, 4, rng, -3, 3));
  CHECK(feature_space_radius(gram(KernelSpec::rbf(3.0), s)) == 1.0);

  const SampleMatrix r5((Matrix(2, 2) << 0, 0, 3, 4).finished());
  CHECK(feature_space_radius(gram(KernelSpec::linear(), r5)) == 5.0);

  CHECK(feature_space_radius(gram(KernelSpec::linear(), SampleMatrix(Matrix::Zero(3, 2)))) == 0.0);
}

TEST_CASE("linear-kernel radius matches the largest feature norm") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix x = oracle::random_matrix(2 + trial % 6, 1 + trial % 4, rng, -4, 4);
    const double r = x.rowwise().norm().maxCoeff();
    CHECK(std::abs(feature_space_radius(gram(KernelSpec::linear(), SampleMatrix(x))) - r) <=
          1e-12 * std::max(1.0, r));
  }
}

TEST_CASE("Gram-side squared distances are nonnegative on PSD Grams") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const SampleMatrix s(oracle::random_matrix(8, 3, rng));
    for (const KernelSpec& spec :
         {KernelSpec::rbf(1.5), KernelSpec::linear(), KernelSpec::polynomial(2, 0.5)}) {
      const GramMatrix g = gram(spec, s);
      REQUIRE(psd_check(g, 1e-10).passed);
      const Matrix& k = g.values();
      for (Eigen::Index i = 0; i < k.rows(); ++i)
        for (Eigen::Index j = 0; j < k.cols(); ++j) CHECK(k(i, i) + k(j, j) - 2 * k(i, j) >= -1e-9);
    }
  }
}

TEST_CASE("cross_gram") {
  const Matrix p = (Matrix(1, 2) << 1, 0).finished();
  const Matrix a = (Matrix(2, 2) << 1, 0, 0, 1).finished();
  CHECK(cross_gram(KernelSpec::linear(), p, a) == (Matrix(1, 2) << 1, 0).finished());
  CHECK_THROWS_AS(cross_gram(KernelSpec::linear(), p, Matrix::Zero(2, 3)), ValidationError);
}
