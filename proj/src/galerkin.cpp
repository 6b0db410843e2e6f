#include "steklov/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "steklov/crossing.hpp"
#include "steklov/errors.hpp"

namespace steklov {

namespace {

constexpr int kPositivityGrid = 4096;
constexpr double kCouplingCutoff = 40.0;
constexpr double kCauchyTol = 1e-9;
constexpr int kMaxAdaptiveModes = 128;
constexpr double kExceedMargin = 1e-6;

std::string describe(const FourierSeries& s) {
  std::ostringstream out;
  out.precision(6);
  out << s.a0;
  for (std::size_t m = 0; m < s.cos.size(); ++m)
    if (s.cos[m] != 0.0) out << (s.cos[m] < 0 ? " - " : " + ") << std::abs(s.cos[m]) << " cos" << m + 1;
  for (std::size_t m = 0; m < s.sin.size(); ++m)
    if (s.sin[m] != 0.0) out << (s.sin[m] < 0 ? " - " : " + ") << std::abs(s.sin[m]) << " sin" << m + 1;
  return out.str();
}

}  // namespace

double FourierSeries::operator()(double theta) const {
  double v = a0;
  for (std::size_t m = 0; m < cos.size(); ++m) v += cos[m] * std::cos((m + 1.0) * theta);
  for (std::size_t m = 0; m < sin.size(); ++m) v += sin[m] * std::sin((m + 1.0) * theta);
  return v;
}

int FourierSeries::highest_harmonic() const noexcept {
  int h = 0;
  for (std::size_t m = 0; m < cos.size(); ++m)
    if (cos[m] != 0.0) h = std::max(h, static_cast<int>(m) + 1);
  for (std::size_t m = 0; m < sin.size(); ++m)
    if (sin[m] != 0.0) h = std::max(h, static_cast<int>(m) + 1);
  return h;
}

double FourierSeries::cos_coeff(int m) const noexcept {
  if (m == 0) return a0;
  return m >= 1 && static_cast<std::size_t>(m) <= cos.size() ? cos[m - 1] : 0.0;
}

double FourierSeries::sin_coeff(int m) const noexcept {
  return m >= 1 && static_cast<std::size_t>(m) <= sin.size() ? sin[m - 1] : 0.0;
}

double FourierSeries::grid_min() const {
  double lo = (*this)(0.0);
  for (int i = 1; i < kPositivityGrid; ++i) lo = std::min(lo, (*this)(2.0 * pi * i / kPositivityGrid));
  return lo;
}

FourierSeries sqrt_series(const FourierSeries& w) {
  if (!(w.grid_min() > 0.0)) throw DomainError("sqrt_series: weight must be positive");
  constexpr int points = kPositivityGrid;
  constexpr int max_harmonic = 48;
  std::vector<double> values(points);
  for (int i = 0; i < points; ++i) values[i] = std::sqrt(w(2.0 * pi * i / points));

  FourierSeries out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.a0 = sum / points;
  for (int m = 1; m <= max_harmonic; ++m) {
    double c = 0.0, s = 0.0;
    for (int i = 0; i < points; ++i) {
      const double th = 2.0 * pi * static_cast<double>(m) * i / points;
      c += values[i] * std::cos(th);
      s += values[i] * std::sin(th);
    }
    c *= 2.0 / points;
    s *= 2.0 / points;
    if (std::abs(c) < 1e-15 * out.a0) c = 0.0;
    if (std::abs(s) < 1e-15 * out.a0) s = 0.0;
    if (c == 0.0 && s == 0.0 && m > w.highest_harmonic()) break;
    out.cos.push_back(c);
    out.sin.push_back(s);
  }
  return out;
}

BoundaryWeight::BoundaryWeight(FourierSeries gamma0, FourierSeries gamma1, double T)
    : g0_(std::move(gamma0)), g1_(std::move(gamma1)), t_(T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    std::ostringstream msg;
    msg << "weight: T must be positive and finite, got " << T;
    throw DomainError(msg.str());
  }
  for (const auto* s : {&g0_, &g1_}) {
    const double lo = s->grid_min();
    if (!(lo > 0.0)) {
      std::ostringstream msg;
      msg << "weight " << (s == &g0_ ? "gamma0" : "gamma1") << " = " << describe(*s)
          << " is not positive (grid minimum " << lo << ")";
      throw DomainError(msg.str());
    }
  }
  if (g0_.a0 < g1_.a0) {
    std::swap(g0_, g1_);
    swapped_ = true;
  }
}

int BoundaryWeight::highest_harmonic() const noexcept {
  return std::max(g0_.highest_harmonic(), g1_.highest_harmonic());
}

namespace {

FourierSeries series_from_json(const nlohmann::json& j) {
  FourierSeries s;
  s.a0 = j.at("a0").get<double>();
  if (j.contains("cos")) s.cos = j.at("cos").get<std::vector<double>>();
  if (j.contains("sin")) s.sin = j.at("sin").get<std::vector<double>>();
  return s;
}

}  // namespace

BoundaryWeight parse_weight_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    return BoundaryWeight(series_from_json(j.at("gamma0")), series_from_json(j.at("gamma1")),
                          j.at("T").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed weight JSON: ") + e.what());
  }
}

BoundaryWeight load_weight_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weight file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_weight_json(buf.str());
}

namespace {

// ∫ w cos(mθ) dθ and ∫ w sin(mθ) dθ for any integer m.
double moment_cos(const FourierSeries& w, int m) {
  m = std::abs(m);
  return m == 0 ? 2.0 * pi * w.a0 : pi * w.cos_coeff(m);
}

double moment_sin(const FourierSeries& w, int m) {
  if (m == 0) return 0.0;
  return m > 0 ? pi * w.sin_coeff(m) : -pi * w.sin_coeff(-m);
}

// Mass entry of basis slots p, q (orthonormal real Fourier basis) against w.
double mass_entry(const FourierSeries& w, int p, int q) {
  const bool p_cos = p % 2 == 1, q_cos = q % 2 == 1;
  const int a = (p + 1) / 2, b = (q + 1) / 2;  // harmonic numbers
  if (p == 0 && q == 0) return moment_cos(w, 0) / (2.0 * pi);
  if (p == 0 || q == 0) {
    const int slot = p == 0 ? q : p;
    const int h = (slot + 1) / 2;
    const double mom = slot % 2 == 1 ? moment_cos(w, h) : moment_sin(w, h);
    return mom / (pi * std::sqrt(2.0));
  }
  if (p_cos && q_cos) return (moment_cos(w, a - b) + moment_cos(w, a + b)) / (2.0 * pi);
  if (!p_cos && !q_cos) return (moment_cos(w, a - b) - moment_cos(w, a + b)) / (2.0 * pi);
  // cos aθ sin bθ = ½ (sin (a+b)θ + sin (b-a)θ)
  const int c = p_cos ? a : b;
  const int s = p_cos ? b : a;
  return (moment_sin(w, c + s) + moment_sin(w, s - c)) / (2.0 * pi);
}

double csch(double x) {
  return 2.0 * std::exp(-x) / (-std::expm1(-2.0 * x));
}

}  // namespace

GalerkinSystem assemble(const BoundaryWeight& weight, int modes) {
  const int h = weight.highest_harmonic();
  if (modes < 1 || modes < 2 * h + 2) {
    std::ostringstream msg;
    msg << "assemble: truncation N=" << modes << " too small; need N >= 2H+2 = " << 2 * h + 2
        << " for highest weight harmonic H=" << h;
    throw DomainError(msg.str());
  }
  const double t = weight.T();
  const int slots = 2 * modes + 1;
  const std::size_t dim = 2 * static_cast<std::size_t>(slots);
  GalerkinSystem sys{modes, t, weight.boundary_length(), linalg::SymMatrix(dim), linalg::SymMatrix(dim)};

  sys.K(basis_index(0, 0), basis_index(0, 0)) = 1.0 / t;
  sys.K(basis_index(0, 1), basis_index(0, 1)) = 1.0 / t;
  sys.K(basis_index(0, 0), basis_index(0, 1)) = -1.0 / t;
  for (int n = 1; n <= modes; ++n) {
    const double x = n * t;
    double diag = n * coth(x);
    double off = x > kCouplingCutoff ? 0.0 : -n * csch(x);
    if (x > kCouplingCutoff) diag = n;
    // (1,1) -> n tanh(nT/2), (1,-1) -> n coth(nT/2)
    const double sym = diag + off, anti = diag - off;
    const double want_sym = n * std::tanh(0.5 * x), want_anti = n * coth(0.5 * x);
    if (std::abs(sym - want_sym) > 1e-12 * want_anti || std::abs(anti - want_anti) > 1e-12 * want_anti) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "assemble: mode " << n << " block eigenpairs off (" << sym << " vs " << want_sym << ", "
          << anti << " vs " << want_anti << ")";
      throw NumericalError(msg.str());
    }
    for (int slot : {2 * n - 1, 2 * n}) {
      sys.K(basis_index(slot, 0), basis_index(slot, 0)) = diag;
      sys.K(basis_index(slot, 1), basis_index(slot, 1)) = diag;
      sys.K(basis_index(slot, 0), basis_index(slot, 1)) = off;
    }
  }

  const FourierSeries* circles[2] = {&weight.gamma0(), &weight.gamma1()};
  for (int c = 0; c < 2; ++c) {
    const FourierSeries& w = *circles[c];
    const int band = w.highest_harmonic();
    for (int p = 0; p < slots; ++p)
      for (int q = 0; q <= p; ++q) {
        if (std::abs((p + 1) / 2 - (q + 1) / 2) > band && (p + 1) / 2 + (q + 1) / 2 > band) continue;
        const double v = mass_entry(w, p, q);
        if (v != 0.0) sys.M(basis_index(p, c), basis_index(q, c)) = v;
      }
  }
  return sys;
}

std::vector<GalerkinEigenpair> solve_spectrum(const GalerkinSystem& system, int count) {
  if (count < 0 || static_cast<std::size_t>(count) + 1 >= system.dim()) {
    std::ostringstream msg;
    msg << "solve_spectrum: count " << count << " must be below dim - 1 = " << system.dim() - 1;
    throw DomainError(msg.str());
  }
  linalg::Eigensystem es;
  try {
    es = linalg::generalized_eigen(system.K, system.M);
  } catch (const NotSPD& e) {
    throw NumericalError(std::string("solve_spectrum: mass matrix not positive definite (invalid weight?): ") +
                         e.what());
  }
  std::vector<GalerkinEigenpair> out;
  out.reserve(count + 1);
  for (int k = 0; k <= count; ++k) {
    const auto v = es.vector(k);
    out.push_back({es.values[k] * system.boundary_length, es.values[k], {v.begin(), v.end()}});
  }
  return out;
}

AdaptiveSpectrum solve_adaptive(const BoundaryWeight& weight, int count, int modes) {
  int n = std::max({modes, 2 * weight.highest_harmonic() + 2, 1});
  // count must fit inside the coarsest system
  while (2 * (2 * n + 1) - 1 <= count) n *= 2;
  auto coarse = solve_spectrum(assemble(weight, n), count);
  while (true) {
    if (2 * n > kMaxAdaptiveModes) {
      std::ostringstream msg;
      msg << "solve_adaptive: sigma_1 not Cauchy to " << kCauchyTol << " by N=" << n;
      throw NumericalError(msg.str());
    }
    auto fine = solve_spectrum(assemble(weight, 2 * n), count);
    const double gap = std::abs(fine[1].normalized - coarse[1].normalized);
    if (gap < kCauchyTol) return {n, gap, std::move(coarse)};
    n *= 2;
    coarse = std::move(fine);
  }
}

MatrixA matrix_A(const BoundaryWeight& weight) {
  const MetricShape shape = weight.symmetric_shape();
  const double limit = crossing_time(1, 0, shape.ratio());
  if (!(weight.T() < limit)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "matrix_A needs T < T_{1,0}(alpha) = " << limit << " (T = " << weight.T()
        << "); for larger T the mu_0 comparison applies (compare --check large-t)";
    throw DomainError(msg.str());
  }
  const double c = weight.gamma1().a0;
  const double alpha = weight.alpha();
  const FourierSeries& f0 = weight.gamma0();
  const FourierSeries& f1 = weight.gamma1();
  const double a1 = f0.cos_coeff(1) / c, a2 = f0.sin_coeff(1) / c;
  const double a3 = f0.cos_coeff(2) / c, a4 = f0.sin_coeff(2) / c;
  const double b1 = f1.cos_coeff(1) / c, b2 = f1.sin_coeff(1) / c;
  const double b3 = f1.cos_coeff(2) / c, b4 = f1.sin_coeff(2) / c;

  const double tau = eigenfunction_offsets(shape, 1).tau;
  const double a = std::cosh(tau);
  const double b = std::cosh(weight.T() - tau);

  const double m01 = -(a * a1 + b * b1);
  const double m02 = -(a * a2 + b * b2);
  const double m11 = -0.5 * (a * a * a3 + b * b * b3);
  const double m12 = -0.5 * (a * a * a4 + b * b * b4);
  MatrixA out{};
  out.entries = {-2.0 * (alpha + 1.0), m01, m02, m01, m11, m12, m02, m12, -m11};
  for (double& e : out.entries) e += 0.0;  // no negative zeros in reports
  out.a = a;
  out.b = b;

  linalg::SymMatrix A(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j <= i; ++j) A(i, j) = out.entries[3 * i + j];
  const auto es = linalg::jacobi_eigen(A);
  std::copy(es.values.begin(), es.values.end(), out.eigenvalues.begin());
  const double tol = 1e-12 * A.frobenius_norm();
  const auto nonpositive = std::count_if(es.values.begin(), es.values.end(), [&](double v) { return v <= tol; });
  out.two_nonpositive = nonpositive >= 2;
  return out;
}

LargeTReport comparison_check_T_large(const BoundaryWeight& weight, int modes) {
  const MetricShape shape = weight.symmetric_shape();
  const double limit = crossing_time(1, 0, shape.ratio());
  if (weight.T() < limit) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "large-T comparison needs T >= T_{1,0}(alpha) = " << limit << " (T = " << weight.T()
        << "); below it use the matrix A comparison (compare --check matrix-a)";
    throw DomainError(msg.str());
  }
  const int n = std::max(modes, 2 * weight.highest_harmonic() + 2);
  const auto pairs = solve_spectrum(assemble(weight, n), 1);
  const double bound = eval_mu(shape, 0).value;
  const double s1 = pairs[1].normalized;
  return {s1, bound, bound - s1, s1 <= bound + comparison_tolerance, weight.is_constant(), n};
}

HarmonicReport comparison_check_harmonic(const BoundaryWeight& weight, int modes) {
  const MatrixA A = matrix_A(weight);
  const int n = std::max(modes, 2 * weight.highest_harmonic() + 2);
  const auto pairs = solve_spectrum(assemble(weight, n), 1);
  const double bound = eval_lambda(weight.symmetric_shape(), 1).value;
  const double s1 = pairs[1].normalized;
  return {A, s1, bound, bound - s1, s1 <= bound + comparison_tolerance, n};
}

OrthogonalReport comparison_check_orthogonal(const BoundaryWeight& weight, int k, int modes) {
  if (k < 1) throw DomainError("orthogonal comparison: k must be >= 1");
  std::vector<std::string> offending;
  const char* names[2] = {"gamma0", "gamma1"};
  const FourierSeries* circles[2] = {&weight.gamma0(), &weight.gamma1()};
  for (int c = 0; c < 2; ++c)
    for (int m = 1; m <= 2 * k; ++m) {
      if (circles[c]->cos_coeff(m) != 0.0) offending.push_back(std::string(names[c]) + " cos" + std::to_string(m));
      if (circles[c]->sin_coeff(m) != 0.0) offending.push_back(std::string(names[c]) + " sin" + std::to_string(m));
    }
  if (!offending.empty()) {
    std::string msg = "orthogonal comparison needs weights orthogonal to E_" + std::to_string(2 * k) +
                      " (harmonics 1.." + std::to_string(2 * k) + "); offending:";
    for (const auto& o : offending) msg += " " + o;
    throw DomainError(msg);
  }
  const int n = std::max(modes, 2 * weight.highest_harmonic() + 2);
  const auto pairs = solve_spectrum(assemble(weight, n), 2 * k);
  const auto sym = enumerate_spectrum(weight.symmetric_shape(), 2 * k);
  OrthogonalReport r{};
  r.k = k;
  r.sigma_odd = pairs[2 * k - 1].normalized;
  r.sigma_even = pairs[2 * k].normalized;
  r.bound_odd = sym[2 * k - 1].value;
  r.bound_even = sym[2 * k].value;
  r.gap_odd = r.bound_odd - r.sigma_odd;
  r.gap_even = r.bound_even - r.sigma_even;
  r.holds = r.sigma_odd <= r.bound_odd + comparison_tolerance &&
            r.sigma_even <= r.bound_even + comparison_tolerance;
  r.modes = n;
  return r;
}

FourierSeries counterexample_weight() { return {1.0, {0.5, 0.125}, {}}; }

CounterexampleReport counterexample_scan(const std::vector<double>& T_values, int modes, bool sqrt_weight) {
  if (T_values.empty()) throw DomainError("counterexample_scan: no T values");
  const double limit = crossing_time(1, 0, BoundaryRatio::from_alpha(1.0));
  for (double t : T_values) {
    if (!(t > 0.0) || !(t < limit)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "counterexample_scan: T = " << t << " outside (0, T_{1,0}(1)) = (0, " << limit << ")";
      throw DomainError(msg.str());
    }
  }
  std::vector<double> ts = T_values;
  std::sort(ts.begin(), ts.end());

  CounterexampleReport report;
  report.weight = sqrt_weight ? sqrt_series(counterexample_weight()) : counterexample_weight();
  report.sqrt_weight = sqrt_weight;
  report.modes = std::max(modes, 2 * report.weight.highest_harmonic() + 2);
  report.holds_throughout = true;
  bool prefix = true;

  for (double t : ts) {
    const BoundaryWeight w(report.weight, report.weight, t);
    const GalerkinSystem sys = assemble(w, report.modes);
    const auto pairs = solve_spectrum(sys, 1);
    const auto& v = pairs[1].coefficients;
    double same = 0.0, opposite = 0.0, total = 0.0;
    for (std::size_t slot = 0; slot < v.size() / 2; ++slot) {
      const double u0 = v[2 * slot], u1 = v[2 * slot + 1];
      same += (u0 - u1) * (u0 - u1);
      opposite += (u0 + u1) * (u0 + u1);
      total += u0 * u0 + u1 * u1;
    }
    // ‖c0 - c1‖^2 + ‖c0 + c1‖^2 = 2 ‖c‖^2
    const double scale = std::sqrt(2.0 * total);
    CounterexampleSample s;
    s.T = t;
    s.sigma1 = pairs[1].raw;
    s.reference = std::tanh(0.5 * t);
    s.difference = s.sigma1 - s.reference;
    s.exceeds = s.difference > kExceedMargin;
    s.parity = same <= opposite ? "even" : "odd";
    s.symmetry_deviation = std::sqrt(std::min(same, opposite)) / scale;
    report.samples.push_back(s);

    if (s.exceeds && prefix) report.threshold = t;
    if (!s.exceeds) {
      prefix = false;
      if (report.holds_throughout) report.first_failure = t;
      report.holds_throughout = false;
    }
  }
  return report;
}

}  // namespace steklov
