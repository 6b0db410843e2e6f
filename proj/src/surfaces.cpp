#include "steklov/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "steklov/crossing.hpp"
#include "steklov/errors.hpp"
#include "steklov/spectral.hpp"

namespace steklov {

namespace {

int multiplier(SurfaceKind kind, int n) {
  switch (kind) {
    case SurfaceKind::NCatenoid:
      return n;
    case SurfaceKind::NMobius:
      return 2 * n;
    case SurfaceKind::EmbeddedR4:
      return n;
  }
  return n;
}

void check_index(SurfaceKind kind, int n) {
  if (n < 1) throw DomainError("surface index n must be >= 1");
  if (kind == SurfaceKind::EmbeddedR4 && (n < 3 || n % 2 == 0)) {
    std::ostringstream msg;
    msg << "embedded surface needs an odd multiplier m >= 3, got " << n;
    throw DomainError(msg.str());
  }
}

double dot(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

// |a|^2 |b|^2 - (a.b)^2 summed as 2x2 minors, which avoids cancellation
// when a and b are nearly parallel.
double wedge_norm(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const double m = a[i] * b[j] - a[j] * b[i];
      s += m * m;
    }
  return std::sqrt(s);
}

}  // namespace

std::string_view to_string(SurfaceKind k) noexcept {
  switch (k) {
    case SurfaceKind::NCatenoid:
      return "catenoid";
    case SurfaceKind::NMobius:
      return "mobius";
    case SurfaceKind::EmbeddedR4:
      return "embedded";
  }
  return "";
}

SurfaceKind parse_surface_kind(std::string_view name) {
  if (name == "catenoid") return SurfaceKind::NCatenoid;
  if (name == "mobius") return SurfaceKind::NMobius;
  if (name == "embedded") return SurfaceKind::EmbeddedR4;
  throw DomainError("unknown surface kind '" + std::string(name) + "' (catenoid|mobius|embedded)");
}

int ambient_dimension(SurfaceKind kind) noexcept { return kind == SurfaceKind::NCatenoid ? 3 : 4; }

double critical_half_range(SurfaceKind kind, int n) {
  check_index(kind, n);
  if (kind == SurfaceKind::NCatenoid) return critical_catenoid_length() / n;
  return 0.5 * symmetric_mu1_crossing(multiplier(kind, n));
}

Point surface_point(SurfaceKind kind, int n, double t, double theta) {
  const double p = multiplier(kind, n);
  if (kind == SurfaceKind::NCatenoid) {
    const double c = std::cosh(p * t);
    return {p * t, c * std::cos(p * theta), c * std::sin(p * theta), 0.0};
  }
  const double sh = p * std::sinh(t);
  const double c = std::cosh(p * t);
  return {sh * std::cos(theta), sh * std::sin(theta), c * std::cos(p * theta), c * std::sin(p * theta)};
}

Point surface_t_tangent(SurfaceKind kind, int n, double t, double theta) {
  const double p = multiplier(kind, n);
  if (kind == SurfaceKind::NCatenoid) {
    const double s = p * std::sinh(p * t);
    return {p, s * std::cos(p * theta), s * std::sin(p * theta), 0.0};
  }
  const double ch = p * std::cosh(t);
  const double s = p * std::sinh(p * t);
  return {ch * std::cos(theta), ch * std::sin(theta), s * std::cos(p * theta), s * std::sin(p * theta)};
}

double SurfaceGrid::theta(int j) const { return 2.0 * pi * j / cols; }

SurfaceSample sample_surface(SurfaceKind kind, int n, int rows, int cols, std::optional<double> half) {
  check_index(kind, n);
  if (rows < 8 || cols < 8) {
    std::ostringstream msg;
    msg << "surface grid must be at least 8x8, got " << rows << "x" << cols;
    throw DomainError(msg.str());
  }
  const double h = half ? *half : critical_half_range(kind, n);
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("surface half-range must be positive");

  SurfaceSample s{kind, n, h, {}};
  SurfaceGrid& g = s.grid;
  g.dim = ambient_dimension(kind);
  g.rows = rows;
  g.cols = cols;
  g.t0 = -h;
  g.t1 = h;
  g.positions.resize(static_cast<std::size_t>(rows) * cols * g.dim);
  for (int i = 0; i < rows; ++i) {
    // Exact endpoints so boundary rows sit on the critical circles.
    const double t = i == 0 ? -h : (i == rows - 1 ? h : g.t(i));
    for (int j = 0; j < cols; ++j) {
      const Point x = surface_point(kind, n, t, g.theta(j));
      std::copy_n(x.begin(), g.dim, g.positions.begin() + (static_cast<std::size_t>(i) * cols + j) * g.dim);
    }
  }
  return s;
}

double free_boundary_residual(const SurfaceSample& sample) {
  const SurfaceGrid& g = sample.grid;
  double worst = 0.0;
  for (int i : {0, g.rows - 1}) {
    const double t = i == 0 ? -sample.half_range : sample.half_range;
    for (int j = 0; j < g.cols; ++j) {
      const double* x = g.at(i, j);
      const Point d = surface_t_tangent(sample.kind, sample.n, t, g.theta(j));
      const double nx = std::sqrt(dot(x, x, g.dim));
      const double nd = std::sqrt(dot(d.data(), d.data(), g.dim));
      if (!(nx > 1e-300) || !(nd > 1e-300)) {
        throw NumericalError("free_boundary_residual: degenerate position or tangent");
      }
      worst = std::max(worst, wedge_norm(x, d.data(), g.dim) / (nx * nd));
    }
  }
  return worst;
}

double boundary_radius_spread(const SurfaceSample& sample) {
  const SurfaceGrid& g = sample.grid;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i : {0, g.rows - 1})
    for (int j = 0; j < g.cols; ++j) {
      const double r = std::sqrt(dot(g.at(i, j), g.at(i, j), g.dim));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  return hi - lo;
}

double discrete_minimality_residual(const SurfaceGrid& g) {
  if (g.rows < 3 || g.cols < 3) throw DomainError("minimality residual needs at least 3x3 points");
  const int d = g.dim;
  const double ht = (g.t1 - g.t0) / (g.rows - 1);
  const double hs = 2.0 * pi / g.cols;
  std::array<double, 4> xt{}, xs{}, xtt{}, xss{}, xts{}, h{};
  double worst = 0.0;
  for (int i = 1; i < g.rows - 1; ++i) {
    for (int j = 0; j < g.cols; ++j) {
      const int jp = (j + 1) % g.cols;
      const int jm = (j + g.cols - 1) % g.cols;
      const double* c = g.at(i, j);
      for (int k = 0; k < d; ++k) {
        const double up = g.at(i + 1, j)[k], dn = g.at(i - 1, j)[k];
        const double rt = g.at(i, jp)[k], lf = g.at(i, jm)[k];
        xt[k] = (up - dn) / (2.0 * ht);
        xs[k] = (rt - lf) / (2.0 * hs);
        xtt[k] = (up - 2.0 * c[k] + dn) / (ht * ht);
        xss[k] = (rt - 2.0 * c[k] + lf) / (hs * hs);
        xts[k] = (g.at(i + 1, jp)[k] - g.at(i + 1, jm)[k] - g.at(i - 1, jp)[k] + g.at(i - 1, jm)[k]) /
                 (4.0 * ht * hs);
      }
      const double e = dot(xt.data(), xt.data(), d);
      const double f = dot(xt.data(), xs.data(), d);
      const double gg = dot(xs.data(), xs.data(), d);
      const double det = e * gg - f * f;
      if (!(det > 0.0)) throw NumericalError("minimality residual: degenerate metric");
      // ½ g^{ij} X_ij
      for (int k = 0; k < d; ++k) h[k] = 0.5 * (gg * xtt[k] - 2.0 * f * xts[k] + e * xss[k]) / det;
      // Remove the tangential part: solve the 2x2 Gram system.
      const double bt = dot(h.data(), xt.data(), d);
      const double bs = dot(h.data(), xs.data(), d);
      const double ct = (gg * bt - f * bs) / det;
      const double cs = (e * bs - f * bt) / det;
      double norm2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double v = h[k] - ct * xt[k] - cs * xs[k];
        norm2 += v * v;
      }
      worst = std::max(worst, std::sqrt(norm2));
    }
  }
  return worst;
}

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

void export_mesh(const SurfaceSample& sample, MeshFormat format, const std::string& path) {
  const SurfaceGrid& g = sample.grid;
  if (format == MeshFormat::Json) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(sample.kind);
    j["n"] = sample.n;
    j["t_range"] = {g.t0, g.t1};
    j["shape"] = {g.rows, g.cols};
    auto& pts = j["grid"] = nlohmann::ordered_json::array();
    for (int i = 0; i < g.rows; ++i)
      for (int c = 0; c < g.cols; ++c) pts.push_back(std::vector<double>(g.at(i, c), g.at(i, c) + g.dim));
    auto out = open_for_write(path);
    out << j.dump() << '\n';
    finish(out, path);
    return;
  }

  auto out = open_for_write(path);
  char buf[128];
  out << "# " << to_string(sample.kind) << " n=" << sample.n << " grid " << g.rows << "x" << g.cols << '\n';
  if (g.dim == 4) out << "# projection: true\n";
  for (int i = 0; i < g.rows; ++i)
    for (int c = 0; c < g.cols; ++c) {
      const double* p = g.at(i, c);
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
      out << buf;
    }
  const auto id = [&](int i, int c) { return i * g.cols + c + 1; };
  for (int i = 0; i + 1 < g.rows; ++i)
    for (int c = 0; c < g.cols; ++c) {
      const int c2 = (c + 1) % g.cols;
      out << "f " << id(i, c) << ' ' << id(i + 1, c) << ' ' << id(i + 1, c2) << '\n';
      out << "f " << id(i, c) << ' ' << id(i + 1, c2) << ' ' << id(i, c2) << '\n';
    }
  finish(out, path);
}

MeshJson read_mesh_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
    MeshJson m;
    m.kind = j.at("kind").get<std::string>();
    m.n = j.at("n").get<int>();
    m.t_range = {j.at("t_range").at(0).get<double>(), j.at("t_range").at(1).get<double>()};
    m.rows = j.at("shape").at(0).get<int>();
    m.cols = j.at("shape").at(1).get<int>();
    m.grid = j.at("grid").get<std::vector<std::vector<double>>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed mesh JSON '" + path + "': " + e.what());
  }
}

}  // namespace steklov
