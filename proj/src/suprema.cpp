#include "steklov/suprema.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>
#include <tuple>

#include "steklov/crossing.hpp"
#include "steklov/errors.hpp"

namespace steklov {

namespace {

constexpr double kScanSlack = 1e-9;

std::string crossing_label(int k, int l) {
  return "T_{" + std::to_string(k) + "," + std::to_string(l) + "}";
}

std::string lambda_at(int n, const std::string& where) {
  return "lambda_" + std::to_string(n) + "(" + where + ")";
}

double lambda_at_infinity(const BoundaryRatio& r, int n) {
  if (n == 0) return 0.0;
  return eval_lambda(MetricShape(r, ConformalLength::infinite()), n).value;
}

double lambda_at_crossing(const BoundaryRatio& r, int k, int l) {
  const double t = crossing_time(k, l, r);
  return eval_lambda(MetricShape(r, ConformalLength::finite(t)), k).value;
}

UpperBound odd_bound(int k, const MetricShape& shape) {
  const BoundaryRatio& r = shape.ratio();
  const double t = shape.T();
  const int s = partition_index(k, r.alpha());

  if (k == 1) {
    return {lambda_at_crossing(r, 1, 0), s, {-1, 0.0, unbounded, lambda_at(1, crossing_label(1, 0))}};
  }
  const double first_end = crossing_time(k - 1, 0, r);
  if (t < first_end) {
    return {lambda_at_crossing(r, k, 0), s,
            {-1, 0.0, first_end, lambda_at(k, crossing_label(k, 0))}};
  }
  if (s == 0) {
    return {lambda_at_infinity(r, k - 1), s, {0, first_end, unbounded, lambda_at(k - 1, "inf")}};
  }
  for (int j = 1; j <= s - 1; ++j) {
    const double lo = crossing_time(k - j, j - 1, r);
    const double hi = crossing_time(k - j - 1, j, r);
    if (t >= lo && t < hi) {
      return {lambda_at_crossing(r, k - j, j), s,
              {j, lo, hi, lambda_at(k - j, crossing_label(k - j, j))}};
    }
  }
  const double lo = crossing_time(k - s, s - 1, r);
  const double at_crossing = lambda_at_crossing(r, k - s, s);
  const double at_infinity = lambda_at_infinity(r, k - s - 1);
  std::string source = "max(" + lambda_at(k - s, crossing_label(k - s, s)) + "," +
                       lambda_at(k - s - 1, "inf") + ")";
  return {std::max(at_crossing, at_infinity), s, {s, lo, unbounded, std::move(source)}};
}

UpperBound even_bound(int k, const MetricShape& shape) {
  const BoundaryRatio& r = shape.ratio();
  const double t = shape.T();
  const int s = partition_index(k, r.alpha());

  if (k == 1) {
    return {eval_lambda(shape, 1).value, s, {-1, 0.0, unbounded, lambda_at(1, "T")}};
  }
  const double first_end = crossing_time(k, 0, r);
  if (t < first_end) {
    return {lambda_at_crossing(r, k, 0), s,
            {-1, 0.0, first_end, lambda_at(k, crossing_label(k, 0))}};
  }
  if (s == 0) {
    if (r.alpha() < k) {
      return {lambda_at_crossing(r, k, 1), s,
              {0, first_end, unbounded, lambda_at(k, crossing_label(k, 1))}};
    }
    return {lambda_at_infinity(r, k), s, {0, first_end, unbounded, lambda_at(k, "inf")}};
  }
  for (int j = 0; j <= s - 1; ++j) {
    const double lo = crossing_time(k - j, j, r);
    const double hi = crossing_time(k - j - 1, j + 1, r);
    if (t >= lo && t < hi) {
      return {lambda_at_crossing(r, k - j, j + 1), s,
              {j, lo, hi, lambda_at(k - j, crossing_label(k - j, j + 1))}};
    }
  }
  const double lo = crossing_time(k - s, s, r);
  if (k - s > (s + 1) * r.alpha()) {
    return {lambda_at_crossing(r, k - s, s + 1), s,
            {s, lo, unbounded, lambda_at(k - s, crossing_label(k - s, s + 1))}};
  }
  return {lambda_at_infinity(r, k - s), s, {s, lo, unbounded, lambda_at(k - s, "inf")}};
}

}  // namespace

std::string_view to_string(Parity p) noexcept { return p == Parity::Odd ? "odd" : "even"; }

int partition_index(int k, double alpha) {
  int s = 0;
  while (s + 1 < k && (k - (s + 1)) > (s + 1) * alpha) ++s;
  return s;
}

SupremumResult supremum(int k) {
  if (k < 1) throw DomainError("supremum: index k must be >= 1 (sigma_0 = 0)");
  const double t20 = critical_catenoid_length();
  if (k % 2 == 1) {
    const int m = (k + 1) / 2;
    return {k, 4.0 * m * pi / t20, true, MetricShape::finite(1.0, 2.0 * t20 / m)};
  }
  if (k == 2) return {k, 4.0 * pi, false, MetricShape::infinite(1.0)};

  const int m = k / 2;
  const double t = symmetric_mu1_crossing(m);
  const double value = 4.0 * m * pi * std::tanh(0.5 * m * t);
  const double other = 4.0 * pi * coth(0.5 * t);
  if (std::abs(value - other) > 1e-10 * value) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "supremum: closed forms disagree for k=" << k << " (" << value << " vs " << other << ")";
    throw NumericalError(msg.str());
  }
  return {k, value, true, MetricShape::finite(1.0, t)};
}

UpperBound sigma_upper_bound(int k, Parity parity, const MetricShape& shape) {
  if (k < 1) throw DomainError("sigma_upper_bound: k must be >= 1");
  if (shape.infinite_length()) throw DomainError("sigma_upper_bound: requires finite T");
  return parity == Parity::Odd ? odd_bound(k, shape) : even_bound(k, shape);
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(1.0 + 0.05 * i);
  return grid;
}

std::vector<double> default_T_grid() {
  constexpr int n = 256;
  const double lo = std::log(0.05);
  const double hi = std::log(12.0);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (n - 1));
  grid.front() = 0.05;
  grid.back() = 12.0;
  return grid;
}

namespace {

struct Partial {
  double max = -1.0;
  std::size_t ia = 0;
  std::size_t it = 0;
  std::size_t violations = 0;
  bool seen = false;
};

bool better(const Partial& a, const Partial& b) {
  if (!b.seen) return a.seen;
  if (!a.seen) return false;
  if (a.max != b.max) return a.max > b.max;
  return std::tie(a.ia, a.it) < std::tie(b.ia, b.it);
}

}  // namespace

ScanReport scan_suprema(int k, const std::vector<double>& alpha_grid,
                        const std::vector<double>& T_grid, unsigned threads) {
  if (k < 1) throw DomainError("scan_suprema: k must be >= 1");
  if (alpha_grid.empty() || T_grid.empty()) throw DomainError("scan_suprema: empty grid");
  for (double a : alpha_grid)
    if (!(a >= 1.0) || !std::isfinite(a)) throw DomainError("scan_suprema: alpha grid values must be >= 1");
  for (double t : T_grid)
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("scan_suprema: T grid values must be positive");

  const SupremumResult sup = supremum(k);
  const int half = (k + 1) / 2;
  const Parity parity = k % 2 == 1 ? Parity::Odd : Parity::Even;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(alpha_grid.size()));
  std::vector<Partial> partials(threads);
  std::vector<std::exception_ptr> failures(threads);

  auto rows = [&](unsigned w) {
    Partial& p = partials[w];
    for (std::size_t ia = w; ia < alpha_grid.size(); ia += threads) {
      const BoundaryRatio ratio = BoundaryRatio::from_alpha(alpha_grid[ia]);
      for (std::size_t it = 0; it < T_grid.size(); ++it) {
        const MetricShape shape(ratio, ConformalLength::finite(T_grid[it]));
        const double v = normalized_eigenvalue(shape, k);
        const double cert = sigma_upper_bound(half, parity, shape).bound;
        if (v > cert + kScanSlack || cert > sup.value + kScanSlack) ++p.violations;
        Partial candidate{v, ia, it, 0, true};
        if (better(candidate, p)) {
          p.max = v;
          p.ia = ia;
          p.it = it;
          p.seen = true;
        }
      }
    }
  };
  auto worker = [&](unsigned w) {
    try {
      rows(w);
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& th : pool) th.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  Partial best;
  std::size_t violations = 0;
  for (const Partial& p : partials) {
    violations += p.violations;
    if (better(p, best)) best = p;
  }

  ScanReport r{};
  r.k = k;
  r.max = best.max;
  r.argmax_alpha = alpha_grid[best.ia];
  r.argmax_T = T_grid[best.it];
  r.argmax_alpha_index = best.ia;
  r.argmax_T_index = best.it;
  r.supremum = sup.value;
  r.margin = sup.value - best.max;
  r.bound_respected = best.max <= sup.value + kScanSlack;
  r.points = alpha_grid.size() * T_grid.size();
  r.certificate_violations = violations;
  return r;
}

}  // namespace steklov
