#include <doctest.h>

#include <cmath>
#include <random>

#include "steklov/crossing.hpp"
#include "steklov/errors.hpp"
#include "steklov/spectral.hpp"
#include "steklov/suprema.hpp"

using namespace steklov;

TEST_CASE("supremum values") {
  const double expected[] = {10.47478065598, 4 * pi,         20.94956131195, 21.76559237081,
                             31.42434196793, 31.94949157651, 41.8991226239,  42.28832104115,
                             52.37390327988, 52.68357250231};
  for (int k = 1; k <= 10; ++k) {
    const auto r = supremum(k);
    CHECK(r.k == k);
    CHECK(r.value == doctest::Approx(expected[k - 1]).epsilon(1e-11));
    CHECK(r.attained == (k != 2));
  }
  CHECK(supremum(2).maximizer.infinite_length());
  CHECK(supremum(2).maximizer.alpha() == 1.0);
  CHECK_THROWS_AS(supremum(0), DomainError);
}

TEST_CASE("odd suprema are multiples of the catenoid value") {
  const double t20 = critical_catenoid_length();
  for (int m = 1; m <= 6; ++m) {
    const auto r = supremum(2 * m - 1);
    CHECK(r.value * t20 == doctest::Approx(4 * m * pi).epsilon(1e-14));
    CHECK(r.maximizer.T() == doctest::Approx(2 * t20 / m).epsilon(1e-13));
  }
}

TEST_CASE("suprema are attained at their maximizers") {
  for (int k : {1, 3, 4, 5, 6, 7, 8}) {
    const auto r = supremum(k);
    CHECK(normalized_eigenvalue(r.maximizer, k) == doctest::Approx(r.value).epsilon(1e-11));
  }
  // even values from both branches agree
  for (int m = 2; m <= 6; ++m) {
    const double t = symmetric_mu1_crossing(m);
    CHECK(supremum(2 * m).value == doctest::Approx(4 * pi / std::tanh(t / 2)).epsilon(1e-10));
  }
}

TEST_CASE("supremum ordering") {
  for (int k = 1; k < 10; ++k) CHECK(supremum(k).value < supremum(k + 1).value);
  for (int m = 2; m <= 5; ++m) {
    CHECK(supremum(2 * m).value - supremum(2 * m - 1).value > 0.0);
    CHECK(supremum(2 * m).value < 4 * m * pi);
  }
}

TEST_CASE("partition index") {
  CHECK(partition_index(1, 1.0) == 0);
  CHECK(partition_index(2, 1.0) == 0);
  CHECK(partition_index(3, 1.0) == 1);
  CHECK(partition_index(5, 1.0) == 2);
  CHECK(partition_index(5, 1.4) == 2);
  CHECK(partition_index(5, 1.6) == 1);
  CHECK(partition_index(5, 4.5) == 0);
  for (int k = 1; k <= 9; ++k)
    for (double alpha : {1.0, 1.2, 2.0, 3.7}) {
      const int s = partition_index(k, alpha);
      CHECK(k - s > s * alpha);
      CHECK_FALSE(k - (s + 1) > (s + 1) * alpha);
    }
}

TEST_CASE("upper bounds dominate the spectrum and stay below the suprema") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ua(1.0, 4.0), ulog(std::log(0.02), std::log(20.0));
  int checked = 0;
  for (int i = 0; i < 1500; ++i) {
    const auto shape = MetricShape::finite(ua(rng), std::exp(ulog(rng)));
    const int k = 1 + i % 6;
    for (Parity p : {Parity::Odd, Parity::Even}) {
      const int rank = p == Parity::Odd ? 2 * k - 1 : 2 * k;
      const auto ub = sigma_upper_bound(k, p, shape);
      const double sigma = normalized_eigenvalue(shape, rank);
      CHECK(sigma <= ub.bound * (1 + 1e-12));
      if (rank != 2) CHECK(ub.bound <= supremum(rank).value * (1 + 1e-12));
      CHECK(ub.s == partition_index(k, shape.alpha()));
      CHECK(shape.T() >= ub.active.lower);
      CHECK(shape.T() <= ub.active.upper);
      ++checked;
    }
  }
  CHECK(checked == 3000);
}

TEST_CASE("bound for sigma_2 on the symmetric metric") {
  const auto shape = MetricShape::finite(1.0, 2.0);
  const auto ub = sigma_upper_bound(1, Parity::Even, shape);
  CHECK(ub.bound >= normalized_eigenvalue(shape, 2));
  CHECK(ub.bound <= 4 * pi * (1 + 1e-15));
  CHECK_FALSE(ub.active.source.empty());
  CHECK_THROWS_AS(sigma_upper_bound(0, Parity::Odd, shape), DomainError);
}

TEST_CASE("scan on a small grid") {
  const std::vector<double> alphas{1.0, 1.5, 2.0};
  std::vector<double> ts;
  for (int i = 0; i < 40; ++i) ts.push_back(0.1 * std::pow(1.1, i));
  const auto r = scan_suprema(1, alphas, ts, 1);
  CHECK(r.points == alphas.size() * ts.size());
  CHECK(r.argmax_alpha == 1.0);
  CHECK(r.max <= r.supremum);
  CHECK(r.bound_respected);
  CHECK(r.certificate_violations == 0);
  // brute-force oracle over the same grid
  double best = -1.0;
  for (double a : alphas)
    for (double t : ts) best = std::max(best, normalized_eigenvalue(MetricShape::finite(a, t), 1));
  CHECK(r.max == best);
}

TEST_CASE("scan result is independent of the thread count") {
  std::vector<double> alphas;
  for (int i = 0; i < 9; ++i) alphas.push_back(1.0 + 0.25 * i);
  std::vector<double> ts;
  for (int i = 0; i < 60; ++i) ts.push_back(0.05 * std::pow(1.08, i));
  for (int k : {2, 3, 6}) {
    const auto one = scan_suprema(k, alphas, ts, 1);
    for (unsigned th : {2u, 3u, 8u}) {
      const auto many = scan_suprema(k, alphas, ts, th);
      CHECK(many.max == one.max);
      CHECK(many.argmax_alpha_index == one.argmax_alpha_index);
      CHECK(many.argmax_T_index == one.argmax_T_index);
      CHECK(many.certificate_violations == one.certificate_violations);
    }
  }
}

TEST_CASE("default scans") {
  CHECK(default_alpha_grid().size() == 61);
  CHECK(default_T_grid().size() == 256);
  const auto r2 = scan_suprema(2, default_alpha_grid(), default_T_grid());
  CHECK(r2.max < 4 * pi);
  CHECK(r2.argmax_alpha == 1.0);
  CHECK(r2.certificate_violations == 0);
  const auto r3 = scan_suprema(3, default_alpha_grid(), default_T_grid());
  // the grid misses T_{2,0} exactly, so a neighbouring alpha can win
  CHECK(r3.argmax_alpha <= 1.1);
  CHECK(r3.argmax_T == doctest::Approx(critical_catenoid_length()).epsilon(0.03));
  CHECK(r3.margin >= 0.0);
  CHECK(r3.margin < 0.05 * r3.supremum);
}
