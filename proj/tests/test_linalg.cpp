#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "steklov/errors.hpp"
#include "steklov/linalg.hpp"

using namespace steklov;
using linalg::SymMatrix;

namespace {

SymMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = u(rng);
  return a;
}

SymMatrix random_spd(std::size_t n, std::mt19937_64& rng) {
  const SymMatrix b = random_symmetric(n, rng);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += b(i, k) * b(j, k);
      a(i, j) = s + (i == j ? 0.5 : 0.0);
    }
  return a;
}

Eigen::MatrixXd to_eigen(const SymMatrix& a) {
  Eigen::MatrixXd m(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
  return m;
}

}  // namespace

TEST_CASE("cholesky hand examples") {
  const auto id = linalg::cholesky(SymMatrix::identity(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

  SymMatrix a(2);
  a(0, 0) = 4;
  a(1, 0) = 2;
  a(1, 1) = 5;
  const auto l = linalg::cholesky(a);
  CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l(0, 1) == 0.0);

  SymMatrix bad(2);
  bad(0, 0) = 1;
  bad(1, 0) = 2;
  bad(1, 1) = 1;
  CHECK_THROWS_AS(linalg::cholesky(bad), NotSPD);
  CHECK_THROWS_AS(linalg::cholesky(bad), NumericalError);
}

TEST_CASE("cholesky reconstruction and solves") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 5u, 30u}) {
    const SymMatrix a = random_spd(n, rng);
    const auto l = linalg::cholesky(a);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k <= j; ++k) s += l(i, k) * l(j, k);
        err = std::max(err, std::abs(s - a(i, j)));
      }
    CHECK(err <= n * 1e-15 * a.frobenius_norm() * 10);

    std::vector<double> x(n), b;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(1.0 + i);
    b = a.multiply(x);
    l.solve_lower(b);
    l.solve_upper(b);
    for (std::size_t i = 0; i < n; ++i) CHECK(b[i] == doctest::Approx(x[i]).epsilon(1e-9));
  }
}

TEST_CASE("cholesky rejects non-finite input") {
  SymMatrix a = SymMatrix::identity(2);
  a(1, 0) = std::nan("");
  CHECK_THROWS_AS(linalg::cholesky(a), NotSPD);
}

TEST_CASE("jacobi small cases") {
  const std::vector<double> d{3, 1, 2};
  const auto es = linalg::jacobi_eigen(SymMatrix::diagonal(d));
  CHECK(es.values == std::vector<double>{1, 2, 3});
  // Permutation eigenvectors: value 1 lives on axis 1, 2 on axis 2, 3 on axis 0.
  CHECK(std::abs(es.vector(0)[1]) == 1.0);
  CHECK(std::abs(es.vector(1)[2]) == 1.0);
  CHECK(std::abs(es.vector(2)[0]) == 1.0);

  SymMatrix r(2);
  r(1, 0) = 1.0;
  const auto er = linalg::jacobi_eigen(r);
  CHECK(er.values[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(er.values[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("jacobi residual and orthogonality on random 50x50") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 3; ++trial) {
    const SymMatrix a = random_symmetric(50, rng);
    const auto es = linalg::jacobi_eigen(a);
    const double norm = a.frobenius_norm();
    CHECK(std::is_sorted(es.values.begin(), es.values.end()));
    double residual = 0.0, ortho = 0.0;
    for (std::size_t k = 0; k < 50; ++k) {
      const auto v = es.vector(k);
      const auto av = a.multiply(v);
      double r2 = 0.0;
      for (std::size_t i = 0; i < 50; ++i) r2 += std::pow(av[i] - es.values[k] * v[i], 2);
      residual = std::max(residual, std::sqrt(r2));
      for (std::size_t m = 0; m < 50; ++m) {
        const auto w = es.vector(m);
        double dot = 0.0;
        for (std::size_t i = 0; i < 50; ++i) dot += v[i] * w[i];
        ortho = std::max(ortho, std::abs(dot - (k == m ? 1.0 : 0.0)));
      }
    }
    CHECK(residual <= 1e-10 * norm);
    CHECK(ortho <= 1e-12);

    // Independent oracle.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(a));
    for (std::size_t k = 0; k < 50; ++k)
      CHECK(es.values[k] == doctest::Approx(oracle.eigenvalues()[k]).epsilon(1e-12).scale(norm));
  }
}

TEST_CASE("jacobi handles degenerate spectra") {
  SymMatrix a(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = 1.0;
  const auto es = linalg::jacobi_eigen(a);
  CHECK(es.values[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(es.values[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(es.values[3] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("generalized reduction against Eigen and Rayleigh quotients") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {3u, 12u, 40u}) {
    const SymMatrix k = random_symmetric(n, rng);
    const SymMatrix m = random_spd(n, rng);
    const auto es = linalg::generalized_eigen(k, m);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(k), to_eigen(m));
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = es.vector(i);
      const double rq = k.bilinear(v, v) / m.bilinear(v, v);
      CHECK(rq == doctest::Approx(es.values[i]).epsilon(1e-10).scale(1.0));
      CHECK(es.values[i] == doctest::Approx(oracle.eigenvalues()[i]).epsilon(1e-9).scale(1.0));
      CHECK(m.bilinear(v, v) == doctest::Approx(1.0).epsilon(1e-10));
      if (i > 0) CHECK(std::abs(m.bilinear(v, es.vector(i - 1))) < 1e-10);
    }
  }
}

TEST_CASE("block-decoupled generalized problem equals the coupled solve") {
  // Two independent 2x2 problems interleaved as indices {0,2} and {1,3}.
  SymMatrix k(4), m(4);
  k(0, 0) = 2; k(2, 0) = -1; k(2, 2) = 3;
  k(1, 1) = 5; k(3, 1) = 0.5; k(3, 3) = 1;
  m(0, 0) = 1; m(2, 0) = 0.2; m(2, 2) = 2;
  m(1, 1) = 3; m(3, 3) = 1;
  const auto es = linalg::generalized_eigen(k, m);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(k), to_eigen(m));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(es.values[i] == doctest::Approx(oracle.eigenvalues()[i]).epsilon(1e-13));
    const auto v = es.vector(i);
    CHECK(m.bilinear(v, v) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("generalized problem with singular mass fails") {
  SymMatrix k = SymMatrix::identity(2);
  SymMatrix m(2);
  m(0, 0) = 1.0;
  CHECK_THROWS_AS(linalg::generalized_eigen(k, m), NotSPD);
}
