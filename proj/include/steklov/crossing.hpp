#pragma once

// Crossing times of the branch families: the unique T > 0 at which
// λ̃_a(β,T) = μ̃_b(β,T). In unnormalized form the defining equation is
//
//   a (coth(aT) - sqrt(coth^2(aT) - β)) = b (coth(bT) + sqrt(coth^2(bT) - β)),
//
// with the right-hand side read as 2/T when b = 0. A crossing exists iff
// α < a/b (always when b = 0).

#include "steklov/spectral.hpp"

namespace steklov {

struct CrossingQuery {
  double a;  // λ̃ side index
  double b;  // μ̃ side index, 0 <= b < a
  BoundaryRatio ratio;

  static CrossingQuery integer(int k, int l, BoundaryRatio ratio);
  static CrossingQuery symmetric(int k, int l) {
    return integer(k, l, BoundaryRatio::from_alpha(1.0));
  }
};

/// Existence predicate: a > b >= 0 and α b < a.
bool crossing_exists(const CrossingQuery& q) noexcept;

struct Crossing {
  double time;        // T at which the branches meet
  double value;       // common unnormalized value u(a,b)
  double normalized;  // 4π u / β, the common normalized eigenvalue
  double residual;    // |lhs - rhs| of the defining equation at `time`
};

/// Throws NoCrossing when α >= a/b, DomainError for malformed indices and
/// NumericalError if no bracket is found.
Crossing solve_crossing(const CrossingQuery& q);

double crossing_time(const CrossingQuery& q);

/// u(a,b), the common unnormalized branch value at the crossing.
double crossing_value(const CrossingQuery& q);

/// lhs - rhs of the defining equation at x (increasing in x).
double crossing_difference(const CrossingQuery& q, double x);

/// T_{k,l}(β) for integer indices.
double crossing_time(int k, int l, const BoundaryRatio& ratio);

/// T_{2,0}(1), the positive root of s = coth s (critical catenoid length).
double critical_catenoid_length();

/// T_{k,1}(1), the positive root of k tanh(ks/2) = coth(s/2).
double symmetric_mu1_crossing(int k);

/// f_β(t) = t^{-2} (sinh^2 t sqrt(coth^2 t - β) - t), increasing in t > 0.
double f_beta_monotone_witness(double beta, double t);

}  // namespace steklov
