#pragma once

// Critical minimal surfaces realizing the odd and even suprema:
//   NCatenoid(n)   (nt, cosh(nt) cos nθ, cosh(nt) sin nθ) in R^3,
//                  t in [-T_{2,0}(1)/n, T_{2,0}(1)/n]
//   NMobius(n)     R^4 family below with p = 2n, t in ±T_{2n,1}(1)/2
//   EmbeddedR4(m)  R^4 family with odd p = m >= 3, t in ±T_{m,1}(1)/2
// where the R^4 family is
//   (p sinh t cos θ, p sinh t sin θ, cosh(pt) cos pθ, cosh(pt) sin pθ).
// θ is sampled on [0, 2π) with wraparound; the Möbius double cover is kept.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace steklov {

enum class SurfaceKind { NCatenoid, NMobius, EmbeddedR4 };

std::string_view to_string(SurfaceKind k) noexcept;
/// "catenoid", "mobius" or "embedded"; throws DomainError otherwise.
SurfaceKind parse_surface_kind(std::string_view name);

int ambient_dimension(SurfaceKind kind) noexcept;

/// Half-length of the critical parameter interval.
double critical_half_range(SurfaceKind kind, int n);

using Point = std::array<double, 4>;  // trailing entries unused in R^3

Point surface_point(SurfaceKind kind, int n, double t, double theta);
/// ∂X/∂t, analytic.
Point surface_t_tangent(SurfaceKind kind, int n, double t, double theta);

/// Positions on a tensor grid: `rows` values of t spanning [t0, t1] with both
/// ends included, `cols` values of θ = 2πj/cols. Point (i,j) starts at
/// ((i*cols)+j)*dim.
struct SurfaceGrid {
  int dim = 3;
  int rows = 0;
  int cols = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<double> positions;

  double t(int i) const { return t0 + (t1 - t0) * i / (rows - 1); }
  double theta(int j) const;
  const double* at(int i, int j) const { return positions.data() + (static_cast<std::size_t>(i) * cols + j) * dim; }
};

struct SurfaceSample {
  SurfaceKind kind;
  int n;
  double half_range;
  SurfaceGrid grid;
};

/// Samples X on [-half, half] x [0, 2π); `half` defaults to the critical
/// half-range. Requires n >= 1 (odd n >= 3 for EmbeddedR4) and a grid of at
/// least 8 x 8.
SurfaceSample sample_surface(SurfaceKind kind, int n, int rows, int cols,
                             std::optional<double> half = std::nullopt);

/// Max over both boundary rows of |sin| of the angle between X and the
/// analytic t-tangent. Zero exactly when the surface meets the sphere
/// through its boundary orthogonally.
double free_boundary_residual(const SurfaceSample& sample);

/// Max |X|-spread over the two boundary rows.
double boundary_radius_spread(const SurfaceSample& sample);

/// Max over interior rows of |½ g^{ij} X_ij| with the tangential part removed,
/// from centered second-order differences (θ periodic). O(h^2) for a minimal
/// immersion.
double discrete_minimality_residual(const SurfaceGrid& grid);

enum class MeshFormat { Obj, Json };

/// OBJ: R^3 positions directly, R^4 as the projection to the first three
/// coordinates (marked by a "# projection: true" line). Quads are split in
/// two triangles and the θ seam is welded. JSON: {kind, n, t_range, shape,
/// grid}. Throws IoError if the file cannot be written.
void export_mesh(const SurfaceSample& sample, MeshFormat format, const std::string& path);

struct MeshJson {
  std::string kind;
  int n = 0;
  std::array<double, 2> t_range{};
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<double>> grid;
};

MeshJson read_mesh_json(const std::string& path);

}  // namespace steklov
