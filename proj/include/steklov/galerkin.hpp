#pragma once

// Fourier-Galerkin solver for the Steklov problem of a conformal metric
// f^2(t,θ)(dt^2 + dθ^2) on [0,T] x S^1.
//
// Harmonicity is conformally invariant in 2D, so the interior factor never
// enters: the Dirichlet energy of the harmonic extension is that of the flat
// cylinder, and only the boundary weights f0(θ) = f(0,θ), f1(θ) = f(T,θ)
// appear, through the boundary mass form. In the orthonormal real Fourier
// basis on each circle the problem is K c = σ M c with
//   K: per-mode flat-cylinder Dirichlet-to-Neumann blocks
//        mode 0:  (1/T) [[1,-1],[-1,1]]
//        mode n:  n [[coth nT, -csch nT],[-csch nT, coth nT]]  (cos and sin)
//   M: ∫ φ_p φ_q f_c dθ on each circle c, banded by the weight harmonics.
// Unknowns are ordered [const Γ0, const Γ1, cos1 Γ0, cos1 Γ1, sin1 Γ0, ...].

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "steklov/linalg.hpp"
#include "steklov/spectral.hpp"

namespace steklov {

/// a0 + Σ_m cos[m-1] cos mθ + sin[m-1] sin mθ
struct FourierSeries {
  double a0 = 1.0;
  std::vector<double> cos;
  std::vector<double> sin;

  double operator()(double theta) const;
  /// Highest harmonic with a nonzero coefficient (0 for constants).
  int highest_harmonic() const noexcept;
  bool is_constant() const noexcept { return highest_harmonic() == 0; }
  double cos_coeff(int m) const noexcept;
  double sin_coeff(int m) const noexcept;
  /// Minimum over a uniform 4096-point grid.
  double grid_min() const;
};

/// Fourier series of sqrt(w) by trapezoidal quadrature, truncated once the
/// coefficients fall below 1e-15 a0 (at most 48 harmonics).
FourierSeries sqrt_series(const FourierSeries& w);

class BoundaryWeight {
 public:
  /// Validates positivity of both series and swaps them if mean(gamma0) <
  /// mean(gamma1), so that α = mean0/mean1 >= 1.
  BoundaryWeight(FourierSeries gamma0, FourierSeries gamma1, double T);

  const FourierSeries& gamma0() const noexcept { return g0_; }
  const FourierSeries& gamma1() const noexcept { return g1_; }
  double T() const noexcept { return t_; }
  bool swapped() const noexcept { return swapped_; }

  double alpha() const noexcept { return g0_.a0 / g1_.a0; }
  double boundary_length() const noexcept { return 2.0 * pi * (g0_.a0 + g1_.a0); }
  MetricShape symmetric_shape() const { return MetricShape::finite(alpha(), t_); }
  int highest_harmonic() const noexcept;
  bool is_constant() const noexcept { return g0_.is_constant() && g1_.is_constant(); }

 private:
  FourierSeries g0_;
  FourierSeries g1_;
  double t_;
  bool swapped_ = false;
};

/// {"T": .., "gamma0": {"a0": .., "cos": [..], "sin": [..]}, "gamma1": {..}}
BoundaryWeight parse_weight_json(const std::string& text);
BoundaryWeight load_weight_file(const std::string& path);

struct GalerkinSystem {
  int modes;  // N: harmonics 0..N on each circle
  double T;
  double boundary_length;
  linalg::SymMatrix K;
  linalg::SymMatrix M;

  std::size_t dim() const noexcept { return K.dim(); }
};

/// Index of (harmonic slot, circle) in the unknown vector; slot 0 is the
/// constant, 2n-1 is cos nθ and 2n is sin nθ.
constexpr std::size_t basis_index(int slot, int circle) noexcept {
  return 2 * static_cast<std::size_t>(slot) + static_cast<std::size_t>(circle);
}

/// Throws DomainError when N < 2 H + 2 for the highest weight harmonic H.
/// Each K block is checked against its closed-form eigenpairs
/// (1,1) -> n tanh(nT/2), (1,-1) -> n coth(nT/2).
GalerkinSystem assemble(const BoundaryWeight& weight, int modes);

struct GalerkinEigenpair {
  double normalized;  // σ̃ = σ L(∂Σ)
  double raw;         // σ
  std::vector<double> coefficients;  // M-orthonormal
};

/// σ̃_0 .. σ̃_count. Requires count < dim - 1.
std::vector<GalerkinEigenpair> solve_spectrum(const GalerkinSystem& system, int count);

struct AdaptiveSpectrum {
  int modes;
  double cauchy_gap;  // |σ̃_1(2N) - σ̃_1(N)| at the accepted N
  std::vector<GalerkinEigenpair> pairs;
};

inline constexpr int default_modes = 64;

/// Starts at max(modes, 2H+2) and doubles N until |σ̃_1(2N) - σ̃_1(N)| < 1e-9,
/// then reports the solve at N. Throws NumericalError if N would exceed 128.
AdaptiveSpectrum solve_adaptive(const BoundaryWeight& weight, int count, int modes = default_modes);

struct MatrixA {
  std::array<double, 9> entries;  // row-major 3x3
  std::array<double, 3> eigenvalues;
  bool two_nonpositive;
  double a;  // cosh(τ_1)
  double b;  // cosh(T - τ_1)
};

/// The 3x3 test matrix on span{x_0, x_1, y_1} for T < T_{1,0}(α). First and
/// second harmonics are taken relative to c = mean(gamma1). An eigenvalue
/// counts as nonpositive when it is <= 1e-12 times the matrix norm.
MatrixA matrix_A(const BoundaryWeight& weight);

inline constexpr double comparison_tolerance = 1e-8;

struct LargeTReport {
  double sigma1;
  double bound;  // 8π/(Tβ)
  double gap;    // bound - sigma1
  bool holds;
  bool constant_weights;
  int modes;
};

/// Requires T >= T_{1,0}(α).
LargeTReport comparison_check_T_large(const BoundaryWeight& weight, int modes = 32);

struct HarmonicReport {
  MatrixA A;
  double sigma1;
  double bound;  // λ̃_1(β,T)
  double gap;
  bool holds;
  int modes;
};

/// Requires T < T_{1,0}(α).
HarmonicReport comparison_check_harmonic(const BoundaryWeight& weight, int modes = 32);

struct OrthogonalReport {
  int k;
  double sigma_odd;   // Galerkin σ̃_{2k-1}
  double bound_odd;   // σ̃_{2k-1}(β,T)
  double sigma_even;  // Galerkin σ̃_{2k}
  double bound_even;  // σ̃_{2k}(β,T)
  double gap_odd;
  double gap_even;
  bool holds;
  int modes;
};

/// Requires every harmonic 1..2k of both weights to vanish.
OrthogonalReport comparison_check_orthogonal(const BoundaryWeight& weight, int k, int modes = 32);

struct CounterexampleSample {
  double T;
  double sigma1;     // Galerkin σ_1 (unnormalized)
  double reference;  // λ_1(1,T) = tanh(T/2)
  double difference;
  bool exceeds;      // difference > 1e-6
  std::string parity;        // "even" (u(0)=u(T)) or "odd" (u(0)=-u(T))
  double symmetry_deviation; // relative distance to the nearest parity type
};

struct CounterexampleReport {
  FourierSeries weight;
  bool sqrt_weight;
  int modes;
  std::vector<CounterexampleSample> samples;
  /// Largest scanned T such that every scanned T' <= T exceeds; empty when
  /// the first sample already fails.
  std::optional<double> threshold;
  bool holds_throughout;
  std::optional<double> first_failure;
};

/// 1 + ½cos θ + ⅛cos 2θ
FourierSeries counterexample_weight();

/// Scans σ_1 of the counterexample weight placed on both circles against
/// tanh(T/2). T values must lie in (0, T_{1,0}(1)).
CounterexampleReport counterexample_scan(const std::vector<double>& T_values, int modes = 32,
                                         bool sqrt_weight = false);

}  // namespace steklov
