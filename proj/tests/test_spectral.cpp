#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "steklov/crossing.hpp"
#include "steklov/errors.hpp"
#include "steklov/spectral.hpp"

using namespace steklov;

namespace {

// Textbook difference form in extended precision, used as an oracle. β is
// rebuilt from α in long double: near β = 1 and large nT, coth^2 - β is
// tiny and a rounded double β would dominate the error.
long double beta_of(long double alpha) { return 4.0L * alpha / ((1.0L + alpha) * (1.0L + alpha)); }

long double naive_lambda(long double alpha, long double t, int n) {
  const long double beta = beta_of(alpha);
  const long double c = std::cosh(n * t) / std::sinh(n * t);
  const long double g = (alpha - 1) * (alpha - 1) / ((alpha + 1) * (alpha + 1));
  return 4.0L * n * pi / beta * (c - std::sqrt(1.0L / (std::sinh(n * t) * std::sinh(n * t)) + g));
}

long double naive_mu(long double alpha, long double t, int n) {
  const long double beta = beta_of(alpha);
  if (n == 0) return 8.0L * pi / (t * beta);
  const long double c = std::cosh(n * t) / std::sinh(n * t);
  const long double g = (alpha - 1) * (alpha - 1) / ((alpha + 1) * (alpha + 1));
  return 4.0L * n * pi / beta * (c + std::sqrt(1.0L / (std::sinh(n * t) * std::sinh(n * t)) + g));
}

// Sorted multiset of all branch values with n <= cutoff.
std::vector<double> brute_force(const MetricShape& s, int count) {
  const int cutoff = 4 * count + 8;
  std::vector<double> all{0.0, static_cast<double>(naive_mu(s.alpha(), s.T(), 0))};
  for (int n = 1; n <= cutoff; ++n) {
    for (int m = 0; m < 2; ++m) {
      all.push_back(static_cast<double>(naive_lambda(s.alpha(), s.T(), n)));
      all.push_back(static_cast<double>(naive_mu(s.alpha(), s.T(), n)));
    }
  }
  std::sort(all.begin(), all.end());
  all.resize(count + 1);
  return all;
}

}  // namespace

TEST_CASE("shape from boundary lengths") {
  const auto a = shape_from_boundary_lengths(2 * pi, 2 * pi, 1.0);
  CHECK(a.alpha() == 1.0);
  CHECK(a.beta() == 1.0);
  CHECK(a.T() == 1.0);
  const auto b = shape_from_boundary_lengths(4 * pi, 2 * pi, 1.0);
  CHECK(b.alpha() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(b.beta() == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  const auto c = shape_from_boundary_lengths(2 * pi, 4 * pi, 1.0);
  CHECK(c.alpha() == b.alpha());
  CHECK(c.beta() == b.beta());
  CHECK_THROWS_AS(shape_from_boundary_lengths(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(shape_from_boundary_lengths(1.0, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(shape_from_boundary_lengths(1.0, INFINITY, 1.0), DomainError);
}

TEST_CASE("boundary ratio round trip") {
  for (double alpha : {1.0, 1.5, 2.0, 7.0, 100.0}) {
    const auto r = BoundaryRatio::from_alpha(alpha);
    const auto back = BoundaryRatio::from_beta(r.beta());
    CHECK(back.alpha() == doctest::Approx(alpha).epsilon(1e-10));
    CHECK(r.one_minus_beta() == doctest::Approx(1.0 - r.beta()).epsilon(1e-12).scale(1.0));
  }
  CHECK(BoundaryRatio::from_alpha(0.5).alpha() == 2.0);
  CHECK_THROWS_AS(BoundaryRatio::from_beta(0.0), DomainError);
  CHECK_THROWS_AS(BoundaryRatio::from_beta(1.5), DomainError);
}

TEST_CASE("branch examples") {
  const auto s = MetricShape::finite(1.0, 2.0);
  CHECK(eval_lambda(s, 1).value == doctest::Approx(4 * pi * std::tanh(1.0)).epsilon(1e-14));
  CHECK(eval_lambda(s, 1).value == doctest::Approx(9.57047).epsilon(1e-5));
  CHECK(eval_lambda(s, 1).multiplicity == 2);
  CHECK(eval_lambda(MetricShape::infinite(1.0), 1).value == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(eval_lambda(MetricShape::infinite(2.0), 1).value == doctest::Approx(3 * pi).epsilon(1e-15));
  CHECK_THROWS_AS(eval_lambda(s, 0), DomainError);

  CHECK(eval_mu(s, 0).value == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(eval_mu(s, 0).multiplicity == 1);
  CHECK(eval_mu(s, 1).value == doctest::Approx(4 * pi / std::tanh(1.0)).epsilon(1e-14));
  CHECK(eval_mu(s, 1).value == doctest::Approx(16.50010).epsilon(1e-5));
  CHECK(eval_mu(MetricShape::infinite(2.0), 3).value == doctest::Approx(18 * pi).epsilon(1e-15));
  CHECK_THROWS_AS(eval_mu(MetricShape::infinite(2.0), 0), DomainError);
}

TEST_CASE("rationalized branch matches the difference form") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(1.0, 6.0), ut(0.05, 6.0);
  for (int i = 0; i < 500; ++i) {
    const auto s = MetricShape::finite(ua(rng), ut(rng));
    const int n = 1 + i % 5;
    CHECK(eval_lambda(s, n).value == doctest::Approx(static_cast<double>(naive_lambda(s.alpha(), s.T(), n))).epsilon(1e-11));
    CHECK(eval_mu(s, n).value == doctest::Approx(static_cast<double>(naive_mu(s.alpha(), s.T(), n))).epsilon(1e-12));
  }
}

TEST_CASE("derivative examples and signs") {
  CHECK(branch_derivative_T(MetricShape::finite(1.0, 2.0), Branch::Mu, 0) == doctest::Approx(-2 * pi).epsilon(1e-15));
  const auto half = MetricShape(BoundaryRatio::from_beta(0.5), ConformalLength::finite(2.0));
  CHECK(branch_derivative_beta(half, Branch::Mu, 0) == doctest::Approx(-16 * pi).epsilon(1e-13));
  CHECK_THROWS_AS(branch_derivative_T(half, Branch::Lambda, 0), DomainError);
  CHECK_THROWS_AS(branch_derivative_T(MetricShape::infinite(1.0), Branch::Lambda, 1), DomainError);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ua(1.0, 5.0), ut(0.05, 5.0);
  for (int i = 0; i < 200; ++i) {
    const auto s = MetricShape::finite(ua(rng), ut(rng));
    const int n = 1 + i % 4;
    CHECK(branch_derivative_T(s, Branch::Lambda, n) > 0.0);
    CHECK(branch_derivative_T(s, Branch::Mu, n) < 0.0);
    CHECK(branch_derivative_beta(s, Branch::Lambda, n) > 0.0);
    CHECK(branch_derivative_beta(s, Branch::Mu, n) < 0.0);
  }
}

TEST_CASE("derivatives against centered differences") {
  const auto s = MetricShape::finite(1.0, 1.0);
  const double h = 1e-5;
  const double fd = (eval_lambda(MetricShape::finite(1.0, 1.0 + h), 1).value -
                     eval_lambda(MetricShape::finite(1.0, 1.0 - h), 1).value) / (2 * h);
  CHECK(branch_derivative_T(s, Branch::Lambda, 1) == doctest::Approx(fd).epsilon(1e-6));

  const auto at = [](double beta) {
    return eval_lambda(MetricShape(BoundaryRatio::from_beta(beta), ConformalLength::finite(1.0)), 2).value;
  };
  const double hb = 1e-6;
  const double fdb = (at(0.9 + hb) - at(0.9 - hb)) / (2 * hb);
  const auto sb = MetricShape(BoundaryRatio::from_beta(0.9), ConformalLength::finite(1.0));
  CHECK(branch_derivative_beta(sb, Branch::Lambda, 2) == doctest::Approx(fdb).epsilon(1e-6));
}

TEST_CASE("branch identities") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ub(0.05, 1.0), ut(0.01, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const auto s = MetricShape(BoundaryRatio::from_beta(ub(rng)), ConformalLength::finite(ut(rng)));
    const int n = 1 + i % 8;
    const double lam = eval_lambda(s, n).value, mu = eval_mu(s, n).value;
    CHECK(lam * mu == doctest::Approx(16.0 * n * n * pi * pi / s.beta()).epsilon(1e-12));
    CHECK(lam < eval_lambda(s, n + 1).value);
    CHECK(eval_mu(s, n - 1).value < mu);
    CHECK(lam < mu);
  }
  for (int n = 1; n <= 6; ++n)
    for (double t : {0.01, 0.3, 1.0, 4.0, 15.0}) {
      const auto s = MetricShape::finite(1.0, t);
      CHECK(eval_lambda(s, n).value == doctest::Approx(4 * n * pi * std::tanh(n * t / 2)).epsilon(1e-12));
      CHECK(eval_mu(s, n).value == doctest::Approx(4 * n * pi / std::tanh(n * t / 2)).epsilon(1e-12));
    }
}

TEST_CASE("limits in T") {
  for (double alpha : {1.0, 1.7, 3.0})
    for (int n = 1; n <= 5; ++n) {
      const double big = eval_lambda(MetricShape::finite(alpha, 1e3), n).value;
      const double lim = eval_lambda(MetricShape::infinite(alpha), n).value;
      CHECK(big == doctest::Approx(lim).epsilon(1e-8));
      CHECK(eval_mu(MetricShape::finite(alpha, 1e3), n).value ==
            doctest::Approx(eval_mu(MetricShape::infinite(alpha), n).value).epsilon(1e-8));
      CHECK(eval_lambda(MetricShape::finite(alpha, 1e-6), n).value < 1e-4 * n);
    }
}

TEST_CASE("ratio bounds for the symmetric metric") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(0.01, 20.0);
  std::uniform_int_distribution<int> uk(1, 12);
  for (int i = 0; i < 2000; ++i) {
    int k = uk(rng), l = uk(rng);
    if (k < l) std::swap(k, l);
    const auto s = MetricShape::finite(1.0, ut(rng));
    const double r = eval_lambda(s, k).value / eval_lambda(s, l).value;
    CHECK(r >= static_cast<double>(k) / l * (1 - 1e-14));
    CHECK(r <= static_cast<double>(k * k) / (l * l) * (1 + 1e-14));
  }
}

TEST_CASE("monotonicity agrees with derivative signs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ub(0.05, 1.0), ut(0.05, 3.0);
  for (int i = 0; i < 500; ++i) {
    double t1 = ut(rng), t2 = ut(rng), b1 = ub(rng), b2 = ub(rng);
    if (t1 > t2) std::swap(t1, t2);
    if (b1 > b2) std::swap(b1, b2);
    if (t2 - t1 < 1e-3 || b2 - b1 < 1e-3) continue;
    const int n = 1 + i % 4;
    const auto r1 = BoundaryRatio::from_beta(b1), r2 = BoundaryRatio::from_beta(b2);
    const auto s11 = MetricShape(r1, ConformalLength::finite(t1));
    const auto s12 = MetricShape(r1, ConformalLength::finite(t2));
    const auto s21 = MetricShape(r2, ConformalLength::finite(t1));
    CHECK(eval_lambda(s11, n).value < eval_lambda(s12, n).value);
    CHECK(eval_mu(s11, n).value > eval_mu(s12, n).value);
    CHECK(eval_lambda(s11, n).value < eval_lambda(s21, n).value);
    CHECK(eval_mu(s11, n).value > eval_mu(s21, n).value);
  }
}

TEST_CASE("enumerate spectrum examples") {
  const double t20 = critical_catenoid_length();
  const auto sp = enumerate_spectrum(MetricShape::finite(1.0, 2 * t20), 3);
  REQUIRE(sp.size() == 4);
  CHECK(sp[0].value == 0.0);
  for (int k = 1; k <= 3; ++k) CHECK(sp[k].value == doctest::Approx(4 * pi / t20).epsilon(1e-12));

  const auto s2 = enumerate_spectrum(MetricShape::finite(1.0, 2.0), 1);
  CHECK(s2[1].value == doctest::Approx(4 * pi * std::tanh(1.0)).epsilon(1e-14));
  CHECK(s2[1].source.family == Branch::Lambda);
  CHECK(s2[1].source.n == 1);

  CHECK_THROWS_AS(enumerate_spectrum(MetricShape::finite(1.0, 1.0), 0), DomainError);
  CHECK_THROWS_AS(enumerate_spectrum(MetricShape::infinite(1.0), 2), DomainError);
}

TEST_CASE("enumerate spectrum equals brute force") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(1.0, 6.0), ut(0.02, 8.0);
  std::uniform_int_distribution<int> uc(1, 40);
  for (int i = 0; i < 200; ++i) {
    const auto s = MetricShape::finite(ua(rng), ut(rng));
    const int count = uc(rng);
    const auto got = enumerate_spectrum(s, count);
    const auto want = brute_force(s, count);
    REQUIRE(got.size() == want.size());
    for (int k = 0; k <= count; ++k) {
      CHECK(got[k].k == k);
      CHECK(got[k].value == doctest::Approx(want[k]).epsilon(1e-12));
      if (k > 0) CHECK(got[k - 1].value <= got[k].value);
    }
  }
}

TEST_CASE("eigenfunction offsets") {
  const auto s = MetricShape::finite(1.0, 3.0);
  const auto off = eigenfunction_offsets(s, 2);
  CHECK(off.tau == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(off.xi == doctest::Approx(1.5).epsilon(1e-14));

  const auto s2 = MetricShape::finite(2.0, 1.0);
  const auto o2 = eigenfunction_offsets(s2, 1);
  const long double c = std::cosh(1.0L) / std::sinh(1.0L);
  const long double rhs = 1.5L * (c - std::sqrt(c * c - 8.0L / 9.0L));
  CHECK(std::tanh(o2.tau) == doctest::Approx(static_cast<double>(rhs)).epsilon(1e-14));
  CHECK(eval_eigenfunction(s2, Eigenfunction::X, 1, 0.2, 0.0) == doctest::Approx(std::cosh(0.2 - o2.tau)));
}

TEST_CASE("eigenfunctions satisfy the Steklov condition") {
  // f(0) = α, f(T) = 1; boundary length 2π(1+α). Outward derivative at t = T is
  // ∂_t, at t = 0 it is -∂_t / α.
  for (double alpha : {1.0, 1.5, 3.0})
    for (double t : {0.5, 1.0, 3.0})
      for (int n = 1; n <= 4; ++n) {
        const auto s = MetricShape::finite(alpha, t);
        const double len = 2 * pi * (1 + alpha);
        const auto off = eigenfunction_offsets(s, n);
        const double lam = eval_lambda(s, n).value / len;
        const double mu = eval_mu(s, n).value / len;
        CHECK(std::abs(n * std::tanh(n * (t - off.tau)) - lam) < 1e-10 * std::max(1.0, lam));
        CHECK(std::abs(n * std::tanh(n * off.tau) / alpha - lam) < 1e-10 * std::max(1.0, lam));
        CHECK(std::abs(n / std::tanh(n * (t - off.xi)) - mu) < 1e-10 * mu);
        CHECK(std::abs(n / std::tanh(n * off.xi) / alpha - mu) < 1e-10 * mu);
        // z_0: linear, derivative 1 at T and -1/α at 0
        const double z_top = eval_eigenfunction(s, Eigenfunction::Z, 0, t, 0.0);
        const double z_bottom = eval_eigenfunction(s, Eigenfunction::Z, 0, 0.0, 0.0);
        const double mu0 = eval_mu(s, 0).value / len;
        CHECK(1.0 / z_top == doctest::Approx(mu0).epsilon(1e-12));
        CHECK(-1.0 / alpha / z_bottom == doctest::Approx(mu0).epsilon(1e-12));
      }
}
