#include "steklov/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "steklov/crossing.hpp"
#include "steklov/errors.hpp"
#include "steklov/galerkin.hpp"
#include "steklov/spectral.hpp"
#include "steklov/suprema.hpp"
#include "steklov/surfaces.hpp"

namespace steklov::cli {

namespace {

using json = nlohmann::ordered_json;

// nlohmann prints the shortest round-trip form; output here is fixed at 17
// significant digits (6 with --pretty), so numbers are written by hand.
void write_number(double v, bool pretty, std::ostream& o) {
  if (!std::isfinite(v)) {
    o << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, pretty ? "%.6g" : "%.17g", v);
  o << buf;
}

void write_json(const json& j, bool pretty, int depth, std::ostream& o) {
  const auto newline = [&](int d) {
    if (!pretty) return;
    o << '\n' << std::string(2 * static_cast<std::size_t>(d), ' ');
  };
  switch (j.type()) {
    case json::value_t::number_float:
      write_number(j.get<double>(), pretty, o);
      return;
    case json::value_t::object: {
      if (j.empty()) {
        o << "{}";
        return;
      }
      o << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) o << ',';
        first = false;
        newline(depth + 1);
        o << json(key).dump() << (pretty ? ": " : ":");
        write_json(value, pretty, depth + 1, o);
      }
      newline(depth);
      o << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        o << "[]";
        return;
      }
      o << '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) o << ',';
        first = false;
        newline(depth + 1);
        write_json(value, pretty, depth + 1, o);
      }
      newline(depth);
      o << ']';
      return;
    }
    default:
      o << j.dump();
  }
}

json length_json(const ConformalLength& len) {
  if (len.is_infinite()) return "infinite";
  return len.value();
}

json shape_json(const MetricShape& s) {
  return {{"alpha", s.alpha()}, {"beta", s.beta()}, {"T", length_json(s.length())}};
}

json bound_json(double v) {
  if (std::isinf(v)) return "infinite";
  return v;
}

json series_json(const FourierSeries& s) {
  return {{"a0", s.a0}, {"cos", s.cos}, {"sin", s.sin}};
}

struct Output {
  bool pretty = false;
  std::string format = "json";
};

struct Command {
  Command(std::string n, json in) : name(std::move(n)), inputs(std::move(in)) {}

  std::string name;
  json inputs;
  json results;
  json tolerances = json::object();
  std::string csv;  // non-empty when the command produced CSV instead
};

void emit(const Command& c, const Output& opt, std::ostream& out) {
  if (!c.csv.empty()) {
    out << c.csv;
    return;
  }
  json env;
  env["command"] = c.name;
  env["inputs"] = c.inputs;
  env["results"] = c.results;
  env["version"] = version;
  env["tolerances"] = c.tolerances;
  write_json(env, opt.pretty, 0, out);
  out << '\n';
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- subcommands --------------------------------------------------------

struct SpectrumArgs {
  double alpha = 1.0;
  double t = 1.0;
  int count = 1;
};

Command do_spectrum(const SpectrumArgs& a, const Output& opt) {
  const MetricShape shape = MetricShape::finite(a.alpha, a.t);
  const auto entries = enumerate_spectrum(shape, a.count);
  Command c{"spectrum", {{"alpha", a.alpha}, {"T", a.t}, {"count", a.count}, {"format", opt.format}}};
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "k,value,family,n,multiplicity\n";
    for (const auto& e : entries)
      csv << e.k << ',' << csv_number(e.value) << ',' << to_string(e.source.family) << ',' << e.source.n << ','
          << e.source.multiplicity << '\n';
    c.csv = csv.str();
    return c;
  }
  json list = json::array();
  for (const auto& e : entries)
    list.push_back({{"k", e.k},
                    {"value", e.value},
                    {"family", to_string(e.source.family)},
                    {"n", e.source.n},
                    {"multiplicity", e.source.multiplicity}});
  c.results = {{"shape", shape_json(shape)}, {"entries", std::move(list)}};
  return c;
}

struct CrossingArgs {
  int k = 2;
  int l = 0;
  double alpha = 1.0;
};

Command do_crossing(const CrossingArgs& a) {
  const BoundaryRatio ratio = BoundaryRatio::from_alpha(a.alpha);
  const Crossing x = solve_crossing(CrossingQuery::integer(a.k, a.l, ratio));
  Command c{"crossing", {{"k", a.k}, {"l", a.l}, {"alpha", a.alpha}}};
  c.results = {{"alpha", ratio.alpha()}, {"beta", ratio.beta()}, {"T", x.time},
               {"value", x.value},      {"normalized", x.normalized}, {"residual", x.residual}};
  c.tolerances = {{"relative_step", 1e-13}, {"bisection_width", 1e-6}};
  return c;
}

struct SupArgs {
  int index = 1;
  bool scan = false;
  unsigned threads = 0;
};

json scan_json(const ScanReport& r) {
  return {{"k", r.k},
          {"max", r.max},
          {"argmax", {{"alpha", r.argmax_alpha}, {"T", r.argmax_T}}},
          {"argmax_index", {r.argmax_alpha_index, r.argmax_T_index}},
          {"supremum", r.supremum},
          {"margin", r.margin},
          {"bound_respected", r.bound_respected},
          {"certificate_violations", r.certificate_violations},
          {"points", r.points}};
}

Command do_sup(const SupArgs& a) {
  const SupremumResult s = supremum(a.index);
  Command c{"sup", {{"index", a.index}, {"scan", a.scan}}};
  c.results = {{"k", s.k},
               {"value", s.value},
               {"attained", s.attained},
               {"maximizer", {{"alpha", s.maximizer.alpha()}, {"T", length_json(s.maximizer.length())}}}};
  if (a.scan) {
    const auto alphas = default_alpha_grid();
    const auto ts = default_T_grid();
    c.results["scan"] = scan_json(scan_suprema(a.index, alphas, ts, a.threads));
    c.inputs["alpha_grid"] = {{"min", alphas.front()}, {"max", alphas.back()}, {"points", alphas.size()}};
    c.inputs["T_grid"] = {{"min", ts.front()}, {"max", ts.back()}, {"points", ts.size()}, {"spacing", "log"}};
    c.tolerances["scan_slack"] = 1e-9;
  }
  if (s.k % 2 == 0 && s.k >= 4) c.tolerances["closed_form_agreement"] = 1e-10;
  return c;
}

struct BoundArgs {
  int index = 1;
  std::string parity = "odd";
  double alpha = 1.0;
  double t = 1.0;
};

Command do_bound(const BoundArgs& a) {
  const Parity parity = a.parity == "odd" ? Parity::Odd : Parity::Even;
  const MetricShape shape = MetricShape::finite(a.alpha, a.t);
  const UpperBound b = sigma_upper_bound(a.index, parity, shape);
  const int rank = parity == Parity::Odd ? 2 * a.index - 1 : 2 * a.index;
  const double sigma = normalized_eigenvalue(shape, rank);
  Command c{"bound", {{"index", a.index}, {"parity", a.parity}, {"alpha", a.alpha}, {"T", a.t}}};
  c.results = {{"shape", shape_json(shape)},
               {"rank", rank},
               {"sigma", sigma},
               {"bound", b.bound},
               {"s", b.s},
               {"case",
                {{"j", b.active.j},
                 {"lower", b.active.lower},
                 {"upper", bound_json(b.active.upper)},
                 {"source", b.active.source}}},
               {"holds", sigma <= b.bound + 1e-9}};
  c.tolerances["slack"] = 1e-9;
  return c;
}

struct SurfaceArgs {
  std::string kind = "catenoid";
  int n = 1;
  std::string grid = "64x64";
  std::string out;
};

std::pair<int, int> parse_grid(const std::string& g) {
  const auto x = g.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(g);
    std::size_t p1 = 0, p2 = 0;
    const int r = std::stoi(g.substr(0, x), &p1);
    const int c = std::stoi(g.substr(x + 1), &p2);
    if (p1 != x || p2 != g.size() - x - 1) throw std::invalid_argument(g);
    return {r, c};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--grid", "expected RxC, got '" + g + "'");
  }
}

Command do_surface(const SurfaceArgs& a, const Output& opt) {
  const auto [rows, cols] = parse_grid(a.grid);
  const SurfaceKind kind = parse_surface_kind(a.kind);
  const SurfaceSample s = sample_surface(kind, a.n, rows, cols);
  const MeshFormat fmt = opt.format == "json" ? MeshFormat::Json : MeshFormat::Obj;
  export_mesh(s, fmt, a.out);
  Command c{"surface", {{"kind", a.kind}, {"n", a.n}, {"grid", {rows, cols}}, {"out", a.out}, {"format", opt.format}}};
  c.results = {{"kind", to_string(kind)},
               {"n", a.n},
               {"ambient_dimension", s.grid.dim},
               {"t_range", {s.grid.t0, s.grid.t1}},
               {"grid", {rows, cols}},
               {"path", a.out},
               {"format", opt.format},
               {"projection", fmt == MeshFormat::Obj && s.grid.dim == 4},
               {"free_boundary_residual", free_boundary_residual(s)},
               {"minimality_residual", discrete_minimality_residual(s.grid)},
               {"boundary_radius_spread", boundary_radius_spread(s)}};
  return c;
}

struct GeneralArgs {
  std::string weights;
  int count = 8;
  int modes = default_modes;
};

json weight_inputs(const BoundaryWeight& w) {
  return {{"T", w.T()},
          {"gamma0", series_json(w.gamma0())},
          {"gamma1", series_json(w.gamma1())},
          {"swapped", w.swapped()}};
}

Command do_general(const GeneralArgs& a) {
  const BoundaryWeight w = load_weight_file(a.weights);
  const AdaptiveSpectrum sp = solve_adaptive(w, a.count, a.modes);
  Command c{"general", {{"weights", a.weights}, {"count", a.count}, {"modes", a.modes}}};
  json list = json::array();
  for (std::size_t k = 0; k < sp.pairs.size(); ++k)
    list.push_back({{"k", k}, {"normalized", sp.pairs[k].normalized}, {"raw", sp.pairs[k].raw}});
  c.results = {{"weight", weight_inputs(w)},
               {"alpha", w.alpha()},
               {"beta", w.symmetric_shape().beta()},
               {"boundary_length", w.boundary_length()},
               {"modes", sp.modes},
               {"cauchy_gap", sp.cauchy_gap},
               {"eigenvalues", std::move(list)}};
  c.tolerances = {{"cauchy", 1e-9}, {"jacobi_off_diagonal", 1e-12}};
  return c;
}

struct CounterexampleArgs {
  double tmin = 0.01;
  double tmax = 0.5;
  int steps = 50;
  int modes = 32;
  bool sqrt_weight = false;
};

Command do_counterexample(const CounterexampleArgs& a) {
  if (a.steps < 1) throw DomainError("counterexample: --steps must be >= 1");
  if (a.steps > 1 && !(a.tmax > a.tmin)) throw DomainError("counterexample: need tmax > tmin");
  std::vector<double> ts;
  for (int i = 0; i < a.steps; ++i)
    ts.push_back(a.steps == 1 ? a.tmin : a.tmin + (a.tmax - a.tmin) * i / (a.steps - 1));
  const CounterexampleReport r = counterexample_scan(ts, a.modes, a.sqrt_weight);
  Command c{"counterexample",
            {{"tmin", a.tmin}, {"tmax", a.tmax}, {"steps", a.steps}, {"modes", a.modes}, {"sqrt_weight", a.sqrt_weight}}};
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"T", s.T},
                       {"sigma1", s.sigma1},
                       {"reference", s.reference},
                       {"difference", s.difference},
                       {"exceeds", s.exceeds},
                       {"parity", s.parity},
                       {"symmetry_deviation", s.symmetry_deviation}});
  c.results = {{"weight", series_json(r.weight)},
               {"modes", r.modes},
               {"threshold", r.threshold ? json(*r.threshold) : json(nullptr)},
               {"holds_throughout", r.holds_throughout},
               {"first_failure", r.first_failure ? json(*r.first_failure) : json(nullptr)},
               {"samples", std::move(samples)}};
  c.tolerances = {{"exceed_margin", 1e-6}};
  return c;
}

struct CompareArgs {
  std::string weights;
  std::string check;
  int k = 1;
  int modes = 32;
};

Command do_compare(const CompareArgs& a) {
  const BoundaryWeight w = load_weight_file(a.weights);
  std::string check = a.check;
  if (check.empty()) {
    const double limit = crossing_time(1, 0, w.symmetric_shape().ratio());
    check = w.T() >= limit ? "large-t" : "matrix-a";
  }
  Command c{"compare", {{"weights", a.weights}, {"check", check}, {"k", a.k}, {"modes", a.modes}}};
  c.tolerances = {{"comparison", comparison_tolerance}};
  json res = {{"weight", weight_inputs(w)}, {"alpha", w.alpha()}, {"beta", w.symmetric_shape().beta()}};
  if (check == "large-t") {
    const LargeTReport r = comparison_check_T_large(w, a.modes);
    res["sigma1"] = r.sigma1;
    res["bound"] = r.bound;
    res["gap"] = r.gap;
    res["holds"] = r.holds;
    res["constant_weights"] = r.constant_weights;
    res["modes"] = r.modes;
  } else if (check == "matrix-a") {
    const HarmonicReport r = comparison_check_harmonic(w, a.modes);
    res["matrix"] = {{r.A.entries[0], r.A.entries[1], r.A.entries[2]},
                     {r.A.entries[3], r.A.entries[4], r.A.entries[5]},
                     {r.A.entries[6], r.A.entries[7], r.A.entries[8]}};
    res["eigenvalues"] = r.A.eigenvalues;
    res["two_nonpositive"] = r.A.two_nonpositive;
    res["a"] = r.A.a;
    res["b"] = r.A.b;
    res["sigma1"] = r.sigma1;
    res["bound"] = r.bound;
    res["gap"] = r.gap;
    res["holds"] = r.holds;
    res["modes"] = r.modes;
  } else {
    const OrthogonalReport r = comparison_check_orthogonal(w, a.k, a.modes);
    res["k"] = r.k;
    res["sigma_odd"] = r.sigma_odd;
    res["bound_odd"] = r.bound_odd;
    res["sigma_even"] = r.sigma_even;
    res["bound_even"] = r.bound_even;
    res["gap_odd"] = r.gap_odd;
    res["gap_even"] = r.gap_even;
    res["holds"] = r.holds;
    res["modes"] = r.modes;
  }
  c.results = std::move(res);
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steklov spectra of conformal metrics on the annulus", "steklov"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version);

  Output opt;
  std::function<Command()> action;

  auto* spectrum = app.add_subcommand("spectrum", "ordered normalized spectrum of a symmetric metric");
  SpectrumArgs spa;
  spectrum->add_option("--alpha", spa.alpha, "boundary length ratio")->required();
  spectrum->add_option("--T", spa.t, "conformal length")->required();
  spectrum->add_option("--count", spa.count, "highest rank K")->required()->check(CLI::PositiveNumber);
  spectrum->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
  spectrum->add_flag("--pretty", opt.pretty);
  spectrum->callback([&] { action = [&] { return do_spectrum(spa, opt); }; });

  auto* crossing = app.add_subcommand("crossing", "crossing time T_{k,l} of lambda_k and mu_l");
  CrossingArgs cra;
  crossing->add_option("--k", cra.k)->required();
  crossing->add_option("--l", cra.l)->required();
  crossing->add_option("--alpha", cra.alpha);
  crossing->add_flag("--pretty", opt.pretty);
  crossing->callback([&] { action = [&] { return do_crossing(cra); }; });

  auto* sup = app.add_subcommand("sup", "supremum M_k over symmetric metrics");
  SupArgs sua;
  sup->add_option("--index", sua.index)->required();
  sup->add_flag("--scan", sua.scan, "also scan the default (alpha, T) grid");
  sup->add_option("--threads", sua.threads, "scan workers (0 = hardware)");
  sup->add_flag("--pretty", opt.pretty);
  sup->callback([&] { action = [&] { return do_sup(sua); }; });

  auto* bound = app.add_subcommand("bound", "piecewise upper bound certificate");
  BoundArgs boa;
  bound->add_option("--index", boa.index)->required();
  bound->add_option("--parity", boa.parity)->required()->check(CLI::IsMember({"odd", "even"}));
  bound->add_option("--alpha", boa.alpha)->required();
  bound->add_option("--T", boa.t)->required();
  bound->add_flag("--pretty", opt.pretty);
  bound->callback([&] { action = [&] { return do_bound(boa); }; });

  auto* surface = app.add_subcommand("surface", "sample and export a critical minimal surface");
  SurfaceArgs sfa;
  surface->add_option("--kind", sfa.kind)->required()->check(CLI::IsMember({"catenoid", "mobius", "embedded"}));
  surface->add_option("--n", sfa.n, "n (catenoid, mobius) or odd multiplier m >= 3 (embedded)")->required();
  surface->add_option("--grid", sfa.grid, "RxC");
  surface->add_option("--out", sfa.out)->required();
  auto* surface_format = surface->add_option("--format", opt.format)->check(CLI::IsMember({"obj", "json"}));
  surface->add_flag("--pretty", opt.pretty);
  surface->callback([&] {
    if (surface_format->count() == 0) opt.format = "obj";
    action = [&] { return do_surface(sfa, opt); };
  });

  auto* general = app.add_subcommand("general", "Galerkin spectrum of a boundary weight file");
  GeneralArgs gea;
  general->add_option("--weights", gea.weights)->required();
  general->add_option("--count", gea.count)->required()->check(CLI::PositiveNumber);
  general->add_option("--modes", gea.modes, "starting truncation N")->check(CLI::PositiveNumber);
  general->add_flag("--pretty", opt.pretty);
  general->callback([&] { action = [&] { return do_general(gea); }; });

  auto* counter = app.add_subcommand("counterexample", "scan sigma_1 of 1 + cos/2 + cos2/8 against tanh(T/2)");
  CounterexampleArgs cea;
  counter->add_option("--tmin", cea.tmin);
  counter->add_option("--tmax", cea.tmax);
  counter->add_option("--steps", cea.steps);
  counter->add_option("--modes", cea.modes)->check(CLI::PositiveNumber);
  counter->add_flag("--sqrt-weight", cea.sqrt_weight, "use the square root of the series as the weight");
  counter->add_flag("--pretty", opt.pretty);
  counter->callback([&] { action = [&] { return do_counterexample(cea); }; });

  auto* compare = app.add_subcommand("compare", "compare a weight with the symmetric metric of equal boundary ratio");
  CompareArgs coa;
  compare->add_option("--weights", coa.weights)->required();
  compare->add_option("--check", coa.check, "large-t | matrix-a | orthogonal (default by regime)")
      ->check(CLI::IsMember({"large-t", "matrix-a", "orthogonal"}));
  compare->add_option("--k", coa.k, "orthogonality order for --check orthogonal");
  compare->add_option("--modes", coa.modes)->check(CLI::PositiveNumber);
  compare->add_flag("--pretty", opt.pretty);
  compare->callback([&] { action = [&] { return do_compare(coa); }; });

  std::vector<const char*> argv{"steklov"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    emit(action(), opt, out);
    return ok;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return domain;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return numerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
}

}  // namespace steklov::cli
