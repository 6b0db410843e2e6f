#include "steklov/crossing.hpp"

#include <cmath>
#include <sstream>

#include "branch_kernels.hpp"
#include "steklov/errors.hpp"

namespace steklov {

namespace {

constexpr double kInitialLow = 1e-8;
constexpr double kInitialHigh = 1.0;
constexpr double kGrowth = 4.0;
constexpr int kMaxExpansions = 60;
constexpr double kBisectionWidth = 1e-6;
constexpr double kRelTol = 1e-13;
constexpr int kMaxPolish = 100;

void validate(const CrossingQuery& q) {
  if (!(q.a > 0.0) || !(q.b >= 0.0) || !std::isfinite(q.a) || !std::isfinite(q.b)) {
    std::ostringstream msg;
    msg << "crossing query needs a > 0 and b >= 0, got a=" << q.a << ", b=" << q.b;
    throw DomainError(msg.str());
  }
  if (!crossing_exists(q)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no crossing: lambda_" << q.a << " meets mu_" << q.b << " only if α<k/l, but alpha = "
        << q.ratio.alpha() << " >= k/l = " << q.a / q.b;
    if (q.a <= q.b) msg << " (lambda_k < mu_l for all T when k <= l)";
    throw NoCrossing(msg.str());
  }
}

}  // namespace

CrossingQuery CrossingQuery::integer(int k, int l, BoundaryRatio ratio) {
  if (k < 1 || l < 0) {
    std::ostringstream msg;
    msg << "crossing indices need k >= 1 and l >= 0, got k=" << k << ", l=" << l;
    throw DomainError(msg.str());
  }
  return {static_cast<double>(k), static_cast<double>(l), ratio};
}

bool crossing_exists(const CrossingQuery& q) noexcept {
  if (!(q.a > q.b) || q.b < 0.0) return false;
  return q.b == 0.0 || q.ratio.alpha() * q.b < q.a;
}

double crossing_difference(const CrossingQuery& q, double x) {
  return detail::lower_kernel(q.a, x, q.ratio) - detail::upper_kernel(q.b, x, q.ratio);
}

Crossing solve_crossing(const CrossingQuery& q) {
  validate(q);
  const auto diff = [&](double x) { return crossing_difference(q, x); };

  double lo = kInitialLow;
  double f_lo = diff(lo);
  double hi = kInitialHigh;
  double f_hi = diff(hi);
  for (int i = 0; f_hi <= 0.0; ++i) {
    if (i == kMaxExpansions) {
      std::ostringstream msg;
      msg << "crossing: failed to bracket the root for a=" << q.a << ", b=" << q.b;
      throw NumericalError(msg.str());
    }
    lo = hi;
    f_lo = f_hi;
    hi *= kGrowth;
    f_hi = diff(hi);
  }
  if (f_lo > 0.0) {
    throw NumericalError("crossing: difference already positive at the lower bracket end");
  }

  while (hi - lo > kBisectionWidth * hi) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = diff(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      f_lo = f_hi = 0.0;
      break;
    }
    (f_mid < 0.0 ? lo : hi) = mid;
    (f_mid < 0.0 ? f_lo : f_hi) = f_mid;
  }

  // Secant polish inside the bracket.
  double x0 = lo, f0 = f_lo, x1 = hi, f1 = f_hi;
  double root = f_lo == 0.0 ? lo : (std::abs(f_lo) < std::abs(f_hi) ? lo : hi);
  for (int iter = 0; iter < kMaxPolish && lo < hi; ++iter) {
    double x = (f1 != f0) ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = diff(x);
    root = x;
    if (fx == 0.0) break;
    (fx < 0.0 ? lo : hi) = x;
    const bool done = std::abs(x - x1) <= kRelTol * x;
    x0 = x1;
    f0 = f1;
    x1 = x;
    f1 = fx;
    if (done) break;
  }

  const double u = detail::lower_kernel(q.a, root, q.ratio);
  return {root, u, 4.0 * pi * u / q.ratio.beta(), std::abs(diff(root))};
}

double crossing_time(const CrossingQuery& q) { return solve_crossing(q).time; }

double crossing_value(const CrossingQuery& q) { return solve_crossing(q).value; }

double crossing_time(int k, int l, const BoundaryRatio& ratio) {
  return crossing_time(CrossingQuery::integer(k, l, ratio));
}

double critical_catenoid_length() {
  static const double length = crossing_time(CrossingQuery::symmetric(2, 0));
  return length;
}

double symmetric_mu1_crossing(int k) { return crossing_time(CrossingQuery::symmetric(k, 1)); }

namespace {

// sinh t - t without cancellation for small t.
double sinh_minus_identity(double t) {
  if (t >= 1.0) return std::sinh(t) - t;
  const double t2 = t * t;
  double term = t * t2 / 6.0;
  double sum = term;
  for (int k = 2; k < 30; ++k) {
    term *= t2 / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

double f_beta_monotone_witness(double beta, double t) {
  if (!(t > 0.0)) throw DomainError("f_beta: t must be positive");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("f_beta: beta must lie in [0,1]");
  const double gamma = 1.0 - beta;
  if (t < 1e-3) {
    const double t2 = t * t;
    return t * (1.0 / 6.0 + gamma / 2.0) + t * t2 * (1.0 / 120.0 + gamma / 4.0 - gamma * gamma / 8.0);
  }
  // sinh^2 t sqrt(coth^2 t - β) = sinh t sqrt(1 + (1-β) sinh^2 t).
  const double sh = std::sinh(t);
  const double u = gamma * sh * sh;
  const double g = sinh_minus_identity(t) + sh * u / (std::sqrt(1.0 + u) + 1.0);
  return g / (t * t);
}

}  // namespace steklov
