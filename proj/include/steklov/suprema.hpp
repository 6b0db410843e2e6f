#pragma once

// Suprema M_k of σ̃_k over rotationally symmetric metrics, the piecewise
// upper-bound certificates over the crossing-time partition of (0,∞), and
// grid corroboration scans.

#include <limits>
#include <string>
#include <vector>

#include "steklov/spectral.hpp"

namespace steklov {

struct SupremumResult {
  int k;
  double value;
  bool attained;
  /// Attaining shape, or the limit configuration (α = 1, T = ∞) for k = 2.
  MetricShape maximizer;
};

/// M_1 = 4π/T_{2,0}(1), M_2 = 4π (not attained), M_{2m-1} = 4mπ/T_{2,0}(1),
/// M_{2m} = 4mπ tanh(m T_{m,1}(1)/2) for m >= 2. The even values are
/// cross-checked against 4π coth(T_{m,1}(1)/2); disagreement beyond 1e-10
/// relative raises NumericalError.
SupremumResult supremum(int k);

enum class Parity { Odd, Even };

std::string_view to_string(Parity p) noexcept;

inline constexpr double unbounded = std::numeric_limits<double>::infinity();

/// One cell of the crossing-time partition and the bound valid on it.
struct PartitionCase {
  int j;              // partition index; -1 for the leading interval (0, ·)
  double lower;       // 0 for the leading interval
  double upper;       // `unbounded` for the tail
  std::string source; // e.g. "lambda_2(T_{2,1})" or "lambda_1(inf)"
};

struct UpperBound {
  double bound;
  int s;  // largest integer s >= 0 with k - s > s α
  PartitionCase active;
};

/// Bound on σ̃_{2k-1} (Odd) or σ̃_{2k} (Even) for the given finite shape.
UpperBound sigma_upper_bound(int k, Parity parity, const MetricShape& shape);

/// Largest s >= 0 with (k - s)/s > α (s = 0 always qualifies).
int partition_index(int k, double alpha);

struct ScanReport {
  int k;
  double max;
  double argmax_alpha;
  double argmax_T;
  std::size_t argmax_alpha_index;
  std::size_t argmax_T_index;
  double supremum;
  double margin;  // supremum - max
  bool bound_respected;
  std::size_t points;
  /// Grid points where σ̃_k exceeded its certificate by more than 1e-9, or the
  /// certificate exceeded M_k by more than 1e-9.
  std::size_t certificate_violations;
};

std::vector<double> default_alpha_grid();
std::vector<double> default_T_grid();

/// Evaluates σ̃_k over alpha_grid x T_grid. Rows are split across worker
/// threads; the reduction picks the largest value and, on ties, the smallest
/// (alpha, T) index, so the result does not depend on the split.
ScanReport scan_suprema(int k, const std::vector<double>& alpha_grid,
                        const std::vector<double>& T_grid, unsigned threads = 0);

}  // namespace steklov
