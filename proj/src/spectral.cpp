#include "steklov/spectral.hpp"

#include <cmath>
#include <sstream>

#include "branch_kernels.hpp"
#include "steklov/errors.hpp"

namespace steklov {

double coth(double x) {
  if (x > 0.5) return 1.0 + 2.0 / std::expm1(2.0 * x);
  return std::cosh(x) / std::sinh(x);
}

double csch_squared(double x) {
  if (x > 0.5) {
    const double e = std::exp(-2.0 * x);
    const double d = -std::expm1(-2.0 * x);
    return 4.0 * e / (d * d);
  }
  const double s = std::sinh(x);
  return 1.0 / (s * s);
}

ConformalLength ConformalLength::finite(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    std::ostringstream msg;
    msg << "conformal length T must be positive and finite, got " << t;
    throw DomainError(msg.str());
  }
  return ConformalLength(t);
}

double ConformalLength::value() const {
  if (!value_) throw DomainError("operation requires a finite conformal length T");
  return *value_;
}

BoundaryRatio BoundaryRatio::from_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    std::ostringstream msg;
    msg << "boundary ratio alpha must be positive and finite, got " << alpha;
    throw DomainError(msg.str());
  }
  if (alpha < 1.0) alpha = 1.0 / alpha;
  const double q = (alpha - 1.0) / (alpha + 1.0);
  return {alpha, 4.0 * alpha / ((1.0 + alpha) * (1.0 + alpha)), q * q};
}

BoundaryRatio BoundaryRatio::from_beta(double beta) {
  if (!(beta > 0.0) || !(beta <= 1.0)) {
    std::ostringstream msg;
    msg << "beta must lie in (0,1], got " << beta;
    throw DomainError(msg.str());
  }
  // Larger root of β α^2 + (2β - 4) α + β = 0.
  const double root = std::sqrt(1.0 - beta);
  const double alpha = (1.0 + root) / (1.0 - root);
  return {alpha, beta, 1.0 - beta};
}

MetricShape shape_from_boundary_lengths(double l0, double l1, double t) {
  const auto valid = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!valid(l0) || !valid(l1) || !valid(t)) {
    std::ostringstream msg;
    msg << "boundary lengths and T must be positive and finite (L0=" << l0 << ", L1=" << l1
        << ", T=" << t << ")";
    throw DomainError(msg.str());
  }
  return {BoundaryRatio::from_alpha(std::max(l0 / l1, l1 / l0)), ConformalLength::finite(t)};
}

std::string_view to_string(Branch b) noexcept {
  return b == Branch::Lambda ? "lambda" : "mu";
}

namespace {

void require_index(int n, int min, const char* what) {
  if (n < min) {
    std::ostringstream msg;
    msg << what << ": branch index must be >= " << min << ", got " << n;
    throw DomainError(msg.str());
  }
}

}  // namespace

BranchValue eval_lambda(const MetricShape& shape, int n) {
  require_index(n, 1, "eval_lambda");
  const double nd = n;
  double value;
  if (shape.infinite_length()) {
    value = 2.0 * nd * pi * (1.0 + shape.alpha()) / shape.alpha();
  } else {
    value = 4.0 * pi / shape.beta() * detail::lower_kernel(nd, shape.T(), shape.ratio());
  }
  return {Branch::Lambda, n, value, 2};
}

BranchValue eval_mu(const MetricShape& shape, int n) {
  require_index(n, 0, "eval_mu");
  if (n == 0) {
    if (shape.infinite_length())
      throw DomainError("eval_mu: mu_0 is not defined at T = infinity");
    return {Branch::Mu, 0, 8.0 * pi / (shape.T() * shape.beta()), 1};
  }
  const double nd = n;
  double value;
  if (shape.infinite_length()) {
    value = 2.0 * nd * pi * (1.0 + shape.alpha());
  } else {
    value = 4.0 * pi / shape.beta() * detail::upper_kernel(nd, shape.T(), shape.ratio());
  }
  return {Branch::Mu, n, value, 2};
}

BranchValue eval_branch(const MetricShape& shape, Branch family, int n) {
  return family == Branch::Lambda ? eval_lambda(shape, n) : eval_mu(shape, n);
}

double branch_derivative_T(const MetricShape& shape, Branch family, int n) {
  const double t = shape.T();
  if (family == Branch::Lambda) require_index(n, 1, "branch_derivative_T");
  if (family == Branch::Mu && n == 0) return -8.0 * pi / (t * t * shape.beta());
  require_index(n, 1, "branch_derivative_T");

  const double x = n * t;
  const double root = detail::conjugate_root(x, shape.ratio().one_minus_beta());
  const double c2 = csch_squared(x);
  // n v csch^2(nT) / sqrt(coth^2 nT - β); with β = 1 the ratio is csch(nT).
  const double factor = root > 0.0 ? c2 / root : 0.0;
  const double v = eval_branch(shape, family, n).value;
  const double d = n * v * factor;
  return family == Branch::Lambda ? d : -d;
}

double branch_derivative_beta(const MetricShape& shape, Branch family, int n) {
  const double t = shape.T();
  const double beta = shape.beta();
  if (family == Branch::Lambda) require_index(n, 1, "branch_derivative_beta");
  if (family == Branch::Mu && n == 0) return -8.0 * pi / (t * beta * beta);
  require_index(n, 1, "branch_derivative_beta");

  const double x = n * t;
  const double c = coth(x);
  const double root = detail::conjugate_root(x, shape.ratio().one_minus_beta());
  const double v = eval_branch(shape, family, n).value;
  if (family == Branch::Lambda) return v / (2.0 * root * (c + root));
  // -μ / (2 root (c - root)) with (c - root)(c + root) = β.
  return -v * (c + root) / (2.0 * root * beta);
}

std::vector<SpectrumEntry> enumerate_spectrum(const MetricShape& shape, int count) {
  if (count < 1) throw DomainError("enumerate_spectrum: count must be >= 1");
  if (shape.infinite_length())
    throw DomainError("enumerate_spectrum: requires a finite conformal length T");

  std::vector<SpectrumEntry> out;
  out.reserve(static_cast<std::size_t>(count) + 2);
  out.push_back({0, 0.0, {Branch::Lambda, 0, 0.0, 1}});

  // Both families increase in n, so a two-pointer merge of the heads
  // yields the ordered union.
  int next_lambda = 1;
  int next_mu = 0;
  BranchValue lam = eval_lambda(shape, next_lambda);
  BranchValue mu = eval_mu(shape, next_mu);
  while (static_cast<int>(out.size()) <= count) {
    BranchValue pick;
    if (lam.value <= mu.value) {
      pick = lam;
      lam = eval_lambda(shape, ++next_lambda);
    } else {
      pick = mu;
      mu = eval_mu(shape, ++next_mu);
    }
    for (int m = 0; m < pick.multiplicity && static_cast<int>(out.size()) <= count; ++m) {
      out.push_back({static_cast<int>(out.size()), pick.value, pick});
    }
  }
  return out;
}

double normalized_eigenvalue(const MetricShape& shape, int k) {
  if (k == 0) return 0.0;
  return enumerate_spectrum(shape, k)[static_cast<std::size_t>(k)].value;
}

double raw_eigenvalue(double normalized, double boundary_length) {
  if (!(boundary_length > 0.0)) throw DomainError("raw_eigenvalue: boundary length must be positive");
  return normalized / boundary_length;
}

EigenfunctionOffsets eigenfunction_offsets(const MetricShape& shape, int n) {
  require_index(n, 1, "eigenfunction_offsets");
  const double x = n * shape.T();
  const double c = coth(x);
  const double root = detail::conjugate_root(x, shape.ratio().one_minus_beta());
  const double alpha = shape.alpha();
  const double half = 0.5 * (1.0 + alpha);
  // Both atanh arguments approach 1 for large nT, so their distances to 1
  // are formed from positive pieces:
  //   c - 1 = 2/expm1(2x),  root - g = csch^2/(root + g),  g = (α-1)/(α+1).
  const double g = (alpha - 1.0) / (alpha + 1.0);
  const double c_minus_one = x > 0.5 ? 2.0 / std::expm1(2.0 * x) : c - 1.0;
  const double gap = c_minus_one + csch_squared(x) / (root + g);
  const double tanh_arg = half * shape.beta() / (c + root);
  const double tanh_gap = gap / (c + root);
  const double coth_arg = half * (c + root);
  const double coth_gap = (half * gap + (alpha - 1.0)) / coth_arg;
  if (!(tanh_arg > 0.0 && tanh_gap > 0.0) || !(coth_gap > 0.0)) {
    std::ostringstream msg;
    msg << "eigenfunction_offsets: inverse hyperbolic argument out of range (tanh " << tanh_arg
        << ", coth " << coth_arg << ") at nT = " << x;
    throw NumericalError(msg.str());
  }
  // atanh(y) = ½ log1p(2y/(1-y))
  const double y = 1.0 / coth_arg;
  return {0.5 * std::log1p(2.0 * tanh_arg / tanh_gap) / n, 0.5 * std::log1p(2.0 * y / coth_gap) / n};
}

double eval_eigenfunction(const MetricShape& shape, Eigenfunction kind, int n, double t,
                          double theta) {
  if (kind == Eigenfunction::Z && n == 0) return t - shape.T() / (1.0 + shape.alpha());
  const auto [tau, xi] = eigenfunction_offsets(shape, n);
  switch (kind) {
    case Eigenfunction::X:
      return std::cosh(n * (t - tau)) * std::cos(n * theta);
    case Eigenfunction::Y:
      return std::cosh(n * (t - tau)) * std::sin(n * theta);
    case Eigenfunction::Z:
      return std::sinh(n * (t - xi)) * std::cos(n * theta);
    case Eigenfunction::W:
      return std::sinh(n * (t - xi)) * std::sin(n * theta);
  }
  return 0.0;
}

}  // namespace steklov
