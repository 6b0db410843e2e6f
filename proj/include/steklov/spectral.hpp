#pragma once

// Closed-form Steklov spectrum of rotationally symmetric conformal metrics
// f(t)^2 (dt^2 + dθ^2) on the cylinder [0,T] x S^1.
//
// The normalized spectrum σ̃_k = σ_k L(∂Σ) depends only on the boundary
// length ratio α = f(0)/f(T) >= 1 (through β = 4α/(1+α)^2) and on T. It is
// the union of two branch families,
//
//   λ̃_n(β,T) = (4nπ/β)(coth nT - sqrt(coth^2 nT - β)),   n >= 1 (double)
//   μ̃_n(β,T) = (4nπ/β)(coth nT + sqrt(coth^2 nT - β)),   n >= 1 (double)
//   μ̃_0(β,T) = 8π/(Tβ)                                    (simple)
//
// together with σ̃_0 = λ̃_0 = 0. All values returned here are normalized.

#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

namespace steklov {

inline constexpr double pi = std::numbers::pi;

/// coth x for x > 0; uses 1 + 2/expm1(2x) above 0.5.
double coth(double x);

/// csch^2 x for x > 0, without overflow for large x.
double csch_squared(double x);

/// Conformal length T of the cylinder, or the symbolic T = ∞ limit.
class ConformalLength {
 public:
  static ConformalLength finite(double t);
  static ConformalLength infinite() noexcept { return ConformalLength(); }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  /// Throws DomainError for the infinite length.
  double value() const;

  friend bool operator==(const ConformalLength&, const ConformalLength&) = default;

 private:
  ConformalLength() = default;
  explicit ConformalLength(double t) : value_(t) {}
  std::optional<double> value_;
};

/// Boundary length ratio α >= 1 and β = 4α/(1+α)^2 in (0,1].
class BoundaryRatio {
 public:
  /// α < 1 is replaced by 1/α.
  static BoundaryRatio from_alpha(double alpha);
  static BoundaryRatio from_beta(double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  /// 1 - β, kept separately because it is what controls cancellation.
  double one_minus_beta() const noexcept { return one_minus_beta_; }

 private:
  BoundaryRatio(double a, double b, double omb) : alpha_(a), beta_(b), one_minus_beta_(omb) {}
  double alpha_;
  double beta_;
  double one_minus_beta_;
};

class MetricShape {
 public:
  MetricShape(BoundaryRatio ratio, ConformalLength length) : ratio_(ratio), length_(length) {}

  static MetricShape finite(double alpha, double t) {
    return {BoundaryRatio::from_alpha(alpha), ConformalLength::finite(t)};
  }
  static MetricShape infinite(double alpha) {
    return {BoundaryRatio::from_alpha(alpha), ConformalLength::infinite()};
  }

  const BoundaryRatio& ratio() const noexcept { return ratio_; }
  const ConformalLength& length() const noexcept { return length_; }
  double alpha() const noexcept { return ratio_.alpha(); }
  double beta() const noexcept { return ratio_.beta(); }
  bool infinite_length() const noexcept { return length_.is_infinite(); }
  double T() const { return length_.value(); }

 private:
  BoundaryRatio ratio_;
  ConformalLength length_;
};

/// Shape of the symmetric metric with boundary circle lengths L0, L1.
MetricShape shape_from_boundary_lengths(double l0, double l1, double t);

enum class Branch { Lambda, Mu };

std::string_view to_string(Branch b) noexcept;

struct BranchValue {
  Branch family;
  int n;
  double value;
  int multiplicity;
};

struct SpectrumEntry {
  int k;
  double value;
  BranchValue source;
};

/// λ̃_n for n >= 1, evaluated as 4nπ/(coth nT + sqrt(coth^2 nT - β)).
BranchValue eval_lambda(const MetricShape& shape, int n);

/// μ̃_n for n >= 0. μ̃_0 at T = ∞ is rejected.
BranchValue eval_mu(const MetricShape& shape, int n);

BranchValue eval_branch(const MetricShape& shape, Branch family, int n);

/// ∂/∂T of a branch; positive for Lambda, negative for Mu. Finite T only.
double branch_derivative_T(const MetricShape& shape, Branch family, int n);

/// ∂/∂β of a branch at fixed T; positive for Lambda, negative for Mu.
double branch_derivative_beta(const MetricShape& shape, Branch family, int n);

/// σ̃_0 .. σ̃_count by merging the two branch families in increasing n.
/// Equal Lambda and Mu values are ordered Lambda first.
std::vector<SpectrumEntry> enumerate_spectrum(const MetricShape& shape, int count);

/// σ̃_k alone.
double normalized_eigenvalue(const MetricShape& shape, int k);

/// σ = σ̃ / L(∂Σ).
double raw_eigenvalue(double normalized, double boundary_length);

/// Offsets τ_n, ξ_n of the eigenfunctions cosh(n(t-τ_n)) and sinh(n(t-ξ_n)).
struct EigenfunctionOffsets {
  double tau;
  double xi;
};

EigenfunctionOffsets eigenfunction_offsets(const MetricShape& shape, int n);

/// Eigenfunctions of the symmetric metric (f(0) = α, f(T) = 1):
///   X: x_n = cosh(n(t-τ_n)) cos nθ      (λ̃_n)
///   Y: y_n = cosh(n(t-τ_n)) sin nθ      (λ̃_n)
///   Z: z_n = sinh(n(t-ξ_n)) cos nθ      (μ̃_n), z_0 = t - T/(1+α)
///   W: w_n = sinh(n(t-ξ_n)) sin nθ      (μ̃_n)
enum class Eigenfunction { X, Y, Z, W };

double eval_eigenfunction(const MetricShape& shape, Eigenfunction kind, int n, double t,
                          double theta);

}  // namespace steklov
