#pragma once

// Unnormalized branch kernels shared by the spectrum and the crossing solver.
// For real a, b > 0:
//   lower(a, x) = a (coth(ax) - sqrt(coth^2(ax) - β))
//   upper(b, x) = b (coth(bx) + sqrt(coth^2(bx) - β)),  upper(0, x) = 2/x
// so λ̃_n(β,T) = (4π/β) lower(n, T) and μ̃_n(β,T) = (4π/β) upper(n, T).

#include <cmath>

#include "steklov/spectral.hpp"

namespace steklov::detail {

/// sqrt(coth^2 x - β) written as sqrt(csch^2 x + (1 - β)).
inline double conjugate_root(double x, double one_minus_beta) {
  return std::sqrt(csch_squared(x) + one_minus_beta);
}

inline double lower_kernel(double a, double x, const BoundaryRatio& r) {
  const double ax = a * x;
  return a * r.beta() / (coth(ax) + conjugate_root(ax, r.one_minus_beta()));
}

inline double upper_kernel(double b, double x, const BoundaryRatio& r) {
  if (b == 0.0) return 2.0 / x;
  const double bx = b * x;
  return b * (coth(bx) + conjugate_root(bx, r.one_minus_beta()));
}

}  // namespace steklov::detail
