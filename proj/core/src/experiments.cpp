#include "rholab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "rholab/analysis.hpp"
#include "rholab/assembly.hpp"
#include "rholab/calculus.hpp"
#include "rholab/error.hpp"
#include "rholab/frequency.hpp"
#include "rholab/solver.hpp"
#include "rholab/trace.hpp"

namespace rholab {

namespace detail {
// Generated from scenarios/*.cfg at configure time.
const std::vector<std::pair<std::string, std::string>>& bundled_scenario_table();
}  // namespace detail

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MeasureSpec {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> outputs;
};

const std::vector<MeasureSpec>& measure_specs() {
  static const std::vector<MeasureSpec> specs = {
      {"solve_error_vs", {"reference"}, {"max_error"}},
      {"holder", {"field", "radius", "alpha", "random_pairs"}, {"alpha_fit", "seminorm", "seminorm_at_alpha"}},
      {"c1alpha", {"field", "radius", "alpha", "random_pairs"}, {"alpha_fit", "c1", "seminorm_at_alpha"}},
      {"moser", {"p", "beta", "r"}, {"ratio"}},
      {"frequency", {"field", "r0", "r1", "count"}, {"relation_error", "growth"}},
      {"rayleigh", {"mode", "trials"}, {"quotient_min", "target"}},
      {"duality", {"field"}, {"residual"}},
      {"identity_secondyy", {"field"}, {"max_error_over_h2"}},
      {"cutoff_capacity", {"deltas"}, {"energy_min_delta"}},
      {"ode_example", {"y"}, {"d2u_0", "d2u_y", "limit"}},
  };
  return specs;
}

const MeasureSpec& spec_of(const std::string& name) {
  for (const auto& s : measure_specs()) {
    if (s.name == name) return s;
  }
  throw ConfigError(0, "measurements", "unknown measurement '" + name + "'");
}

const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> kinds = {"max", "min", "max_ratio", "min_rate"};
  return kinds;
}

ProblemKind parse_problem(const std::string& s, int line) {
  if (s == "none") return ProblemKind::none;
  if (s == "manufactured_y2") return ProblemKind::manufactured_y2;
  if (s == "constant_f") return ProblemKind::constant_f;
  if (s == "neumann_special") return ProblemKind::neumann_special;
  if (s == "odd_harmonic") return ProblemKind::odd_harmonic;
  if (s == "even_harmonic") return ProblemKind::even_harmonic;
  throw ConfigError(line, "problem.kind", "unknown problem '" + s + "'");
}

[[noreturn]] void incompatible(const std::string& what) {
  throw Error(ErrorKind::measurement_incompatible, what);
}

std::string param_key(const std::string& m, const std::string& p) { return "measure." + m + "." + p; }

double odd_harmonic_data(double a, std::span<const double> z) {
  const double x = z[0];
  const double y = z.back();
  const double s = y >= 0.0 ? 1.0 : -1.0;
  return s * std::pow(std::abs(y), 1.0 - a) * (1.0 + x + x * x - y * y / (3.0 - a));
}

double even_harmonic_data(double a, std::span<const double> z) {
  const double x = z[0];
  const double y = z.back();
  return 1.0 + x * x - y * y / (1.0 + a) + x * x * x - 3.0 * x * y * y / (1.0 + a);
}

double manufactured_f(const WeightParams& w, double y) {
  if (w.eps == 0.0) return -2.0 * (1.0 + w.a);
  return -2.0 - 2.0 * w.a * y * y / (w.eps * w.eps + y * y);
}

/// Exact solution of the configured problem, when one is known.
std::optional<PointFunction> exact_solution(const Scenario& sc, const WeightParams& w) {
  switch (sc.problem) {
    case ProblemKind::manufactured_y2:
      return PointFunction([](std::span<const double> z) { return z.back() * z.back(); });
    case ProblemKind::neumann_special: {
      const double q = sc.flux;
      return PointFunction([w, q](std::span<const double> z) { return q * u_bar(w, std::abs(z.back())); });
    }
    case ProblemKind::odd_harmonic:
      if (w.eps != 0.0) return std::nullopt;
      return PointFunction([a = w.a](std::span<const double> z) { return odd_harmonic_data(a, z); });
    case ProblemKind::even_harmonic:
      if (w.eps != 0.0) return std::nullopt;
      return PointFunction([a = w.a](std::span<const double> z) { return even_harmonic_data(a, z); });
    default:
      return std::nullopt;
  }
}

GridPtr scenario_grid(const Scenario& sc, int level = 0) {
  std::vector<int> cells = sc.cells;
  for (int& c : cells) c <<= level;
  return build_grid(sc.n, cells, sc.half, sc.half ? sc.symmetry : Symmetry::none);
}

Field solve_problem(const Scenario& sc, const WeightParams& w, GridPtr grid) {
  ProblemSpec spec;
  spec.weight = w;
  switch (sc.problem) {
    case ProblemKind::none:
      throw Error(ErrorKind::measurement_incompatible, "no problem to solve");
    case ProblemKind::manufactured_y2: {
      auto yy = [](std::span<const double> z) { return z.back() * z.back(); };
      spec.rhs = RhsKind::volumetric;
      spec.f = sample(grid, [w](std::span<const double> z) { return manufactured_f(w, z.back()); });
      spec.bc = {BoundaryCondition::dirichlet(yy), BoundaryCondition::dirichlet(yy),
                 BoundaryCondition::dirichlet(yy)};
      break;
    }
    case ProblemKind::constant_f:
      spec.rhs = RhsKind::volumetric;
      spec.f = Field(grid, sc.f_value);
      break;
    case ProblemKind::neumann_special: {
      const double q = sc.flux;
      spec.rhs = RhsKind::neumann_flux;
      spec.flux = [q](std::span<const double>) { return q; };
      spec.bc.lateral = BoundaryCondition::neumann();
      spec.bc.top = BoundaryCondition::dirichlet(
          [w, q](std::span<const double> z) { return q * u_bar(w, z.back()); });
      break;
    }
    case ProblemKind::odd_harmonic: {
      auto g = [a = w.a](std::span<const double> z) { return odd_harmonic_data(a, z); };
      spec.bc = {BoundaryCondition::dirichlet(g), BoundaryCondition::dirichlet(g),
                 BoundaryCondition::dirichlet(g)};
      break;
    }
    case ProblemKind::even_harmonic: {
      auto g = [a = w.a](std::span<const double> z) { return even_harmonic_data(a, z); };
      spec.bc = {BoundaryCondition::dirichlet(g), BoundaryCondition::dirichlet(g),
                 BoundaryCondition::dirichlet(g)};
      break;
    }
  }
  return solve(assemble(spec, grid));
}

struct Context {
  const Scenario& sc;
  WeightParams w;
  GridPtr grid;
  std::optional<Field> solution;
  std::vector<Table>* extras = nullptr;
};

Field named_field(const std::string& name, const Context& ctx) {
  if (name == "solution") {
    if (!ctx.solution) incompatible("field 'solution' needs a problem to solve");
    return *ctx.solution;
  }
  if (name == "y2") return sample(ctx.grid, [](std::span<const double> z) { return z.back() * z.back(); });
  if (name == "y4") return sample(ctx.grid, [](std::span<const double> z) { return std::pow(z.back(), 4); });
  if (name == "cos_y2") {
    return sample(ctx.grid, [](std::span<const double> z) {
      return std::cos(M_PI * z[0]) * (1.0 + z.back() * z.back());
    });
  }
  const SolutionId id = parse_solution_id(name);
  return sample(ctx.grid, [id, w = ctx.w](std::span<const double> z) { return catalog(id, w, z); });
}

Field measured_field(const std::string& m, const Context& ctx) {
  const std::string def = ctx.solution ? "solution" : "";
  const std::string name = ctx.sc.params.get_string(param_key(m, "field"), def);
  if (name.empty()) incompatible(m + " needs measure." + m + ".field when no problem is solved");
  return named_field(name, ctx);
}

Region measured_region(const std::string& m, const Context& ctx) {
  const auto r = ctx.sc.params.find_double(param_key(m, "radius"));
  return r ? Region::ball(*r) : Region::whole();
}

using Values = std::vector<std::pair<std::string, double>>;

Values measure(const std::string& m, Context& ctx) {
  const Config& P = ctx.sc.params;
  const Grid& g = *ctx.grid;
  if (m == "solve_error_vs") {
    if (!ctx.solution) incompatible("solve_error_vs needs a problem to solve");
    const std::string ref = P.get_string(param_key(m, "reference"), "exact");
    Field expected;
    if (ref == "exact") {
      const auto f = exact_solution(ctx.sc, ctx.w);
      if (!f) incompatible("no closed-form solution for this problem and weight");
      expected = sample(ctx.grid, *f);
    } else {
      expected = named_field(ref, ctx);
    }
    return {{"max_error", max_abs_difference(*ctx.solution, expected)}};
  }
  if (m == "holder" || m == "c1alpha") {
    const Field u = measured_field(m, ctx);
    const Region region = measured_region(m, ctx);
    const double radius = P.get_double(param_key(m, "radius"), 1.0);
    const auto scales = dyadic_scales(g, radius);
    HolderOptions ho;
    ho.seed = ctx.sc.seed;
    ho.random_pairs = static_cast<int>(P.get_int(param_key(m, "random_pairs"), 1000));
    const auto alpha = P.find_double(param_key(m, "alpha"));
    if (m == "holder") {
      const auto rep = holder_estimate(u, region, scales, ho);
      const double fixed = alpha ? holder_seminorm(u, region, scales, *alpha, ho) : kNaN;
      return {{"alpha_fit", rep.alpha_fit}, {"seminorm", rep.seminorm}, {"seminorm_at_alpha", fixed}};
    }
    const auto rep = c1alpha_estimate(u, region, scales, ho);
    const double fixed = alpha ? c1alpha_seminorm(u, region, scales, *alpha, ho) : kNaN;
    return {{"alpha_fit", rep.alpha_fit}, {"c1", rep.c1 ? 1.0 : 0.0}, {"seminorm_at_alpha", fixed}};
  }
  if (m == "moser") {
    if (!ctx.solution) incompatible("moser needs a solved problem");
    const Field f(ctx.grid, ctx.sc.problem == ProblemKind::constant_f ? ctx.sc.f_value : 0.0);
    return {{"ratio", moser_ratio(*ctx.solution, f, ctx.w, P.get_double(param_key(m, "p"), 4.0),
                                  P.get_double(param_key(m, "beta"), 2.0),
                                  P.get_double(param_key(m, "r"), 0.5))}};
  }
  if (m == "frequency") {
    const Field u = measured_field(m, ctx);
    double h = 0.0;
    for (int d = 0; d < g.dim(); ++d) h = std::max(h, g.h(d));
    const auto radii = log_radii(P.get_double(param_key(m, "r0"), 8.0 * h),
                                 P.get_double(param_key(m, "r1"), 0.8),
                                 static_cast<int>(P.get_int(param_key(m, "count"), 12)));
    const auto prof = compute_HE(u, ctx.w, radii);
    if (ctx.extras) {
      Table t{"frequency", {"r", "H", "E", "dH_dr", "two_E_over_r"}, {}};
      for (std::size_t k = 0; k < prof.radii.size(); ++k) {
        t.rows.push_back({prof.radii[k], prof.H[k], prof.E[k], prof.dH_dr[k], 2.0 * prof.E[k] / prof.radii[k]});
      }
      ctx.extras->push_back(std::move(t));
    }
    const double rel =
        prof.eps == 0.0 && prof.vanishes_on_sigma ? check_derivative_relation(prof) : kNaN;
    return {{"relation_error", rel}, {"growth", growth_exponent(prof)}};
  }
  if (m == "rayleigh") {
    const std::string mode = P.get_string(param_key(m, "mode"), "minimize");
    double q;
    if (mode == "minimize") {
      q = rayleigh_trace_min(ctx.grid, ctx.w);
    } else if (mode == "test") {
      const auto trials = P.get_int(param_key(m, "trials"), 200);
      q = std::numeric_limits<double>::infinity();
      for (long long k = 0; k < trials; ++k) {
        const Field u = sample_trial(ctx.grid, random_trial(ctx.sc.seed + static_cast<std::uint64_t>(k), g.n()));
        q = std::min(q, rayleigh_trace(u, ctx.w));
      }
    } else {
      throw ConfigError(P.line_of(param_key(m, "mode")), param_key(m, "mode"), "expected minimize or test");
    }
    return {{"quotient_min", q}, {"target", 1.0 - ctx.w.a}};
  }
  if (m == "duality") {
    return {{"residual", duality_transform(measured_field(m, ctx), ctx.w).residual}};
  }
  if (m == "identity_secondyy") {
    const Field u = measured_field(m, ctx);
    const Field F = op_Fa(u, ctx.w);
    const Field G = op_G(u);
    const Field D = second_dy(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(F[i] - ctx.w.a * G[i] - D[i]));
    const double h = g.h(g.yaxis());
    return {{"max_error_over_h2", worst / (h * h)}};
  }
  if (m == "cutoff_capacity") {
    std::vector<double> deltas = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    if (P.has(param_key(m, "deltas"))) deltas = P.get_doubles(param_key(m, "deltas"));
    if (deltas.empty()) throw ConfigError(P.line_of(param_key(m, "deltas")), param_key(m, "deltas"), "empty list");
    Table t{"cutoff_capacity", {"delta", "energy", "inverse_log"}, {}};
    double last = kNaN;
    for (double d : deltas) {
      last = cutoff_energy(ctx.w.a, d);
      t.rows.push_back({d, last, 1.0 / std::log(1.0 / d)});
    }
    if (ctx.extras) ctx.extras->push_back(std::move(t));
    return {{"energy_min_delta", last}};
  }
  if (m == "ode_example") {
    const double y = P.get_double(param_key(m, "y"), 0.5);
    return {{"d2u_0", ode_example(ctx.w, 0.0).d2u},
            {"d2u_y", ode_example(ctx.w, y).d2u},
            {"limit", ctx.w.a / (ctx.w.a + 1.0) - 1.0}};
  }
  throw ConfigError(0, "measurements", "unknown measurement '" + m + "'");
}

bool needs_solution(const Scenario& sc) {
  for (const auto& m : sc.measurements) {
    if (m == "solve_error_vs" || m == "moser") return true;
    const auto& params = spec_of(m).params;
    if (std::find(params.begin(), params.end(), "field") != params.end()) {
      if (sc.params.get_string(param_key(m, "field"), "solution") == "solution") return true;
    }
  }
  return false;
}

/// All measurement values of one configuration, columns prefixed by name.
Values measure_all(const Scenario& sc, const WeightParams& w, GridPtr grid, std::vector<Table>* extras) {
  Context ctx{sc, w, grid, std::nullopt, extras};
  if (sc.problem != ProblemKind::none && needs_solution(sc)) ctx.solution = solve_problem(sc, w, grid);
  Values out;
  for (const auto& m : sc.measurements) {
    for (auto& [k, v] : measure(m, ctx)) out.emplace_back(m + "." + k, v);
  }
  return out;
}

void add_point_checks(const Scenario& sc, const Table& t, const std::vector<std::size_t>& rows,
                      Report& rep) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    for (const char* kind : {"max", "min"}) {
      const auto bound = sc.params.find_double("measure." + t.columns[c] + "." + kind);
      if (!bound) continue;
      const bool upper = std::string(kind) == "max";
      double worst = upper ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      bool nan = false;
      for (std::size_t r : rows) {
        const double v = t.rows[r][c];
        if (std::isnan(v)) nan = true;
        worst = upper ? std::max(worst, v) : std::min(worst, v);
      }
      const bool pass = !nan && (upper ? worst <= *bound : worst >= *bound);
      rep.checks.push_back({t.columns[c], kind, nan ? kNaN : worst, *bound, pass});
    }
  }
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_measurement_ranges(const Scenario& sc, double a, double eps) {
  const WeightParams w{a, eps, sc.weight.normalized};
  validate(w);
  for (const auto& m : sc.measurements) {
    if (m == "rayleigh") {
      if (!(a < 1.0)) incompatible("trace quotients need a < 1");
      if (!sc.half || sc.symmetry != Symmetry::odd) incompatible("rayleigh needs an odd half grid");
    } else if (m == "frequency") {
      if (eps != 0.0 && eps != 1.0) incompatible("frequency needs eps = 0 or eps = 1");
      if (!sc.half) incompatible("frequency needs a half grid");
    } else if (m == "identity_secondyy") {
      if (!sc.half || sc.symmetry != Symmetry::even) incompatible("identity_secondyy needs an even half grid");
    } else if (m == "moser") {
      if (sc.problem == ProblemKind::none) incompatible("moser needs a solved problem");
      const double p = sc.params.get_double(param_key(m, "p"), 4.0);
      if (!(p > (sc.n + 1 + std::max(a, 0.0)) / 2.0)) incompatible("moser needs p > (n + 1 + a^+)/2");
    } else if (m == "solve_error_vs") {
      if (sc.problem == ProblemKind::none) incompatible("solve_error_vs needs a problem to solve");
    } else if (m == "ode_example") {
      if (!(eps > 0.0) || !(a > -1.0)) incompatible("ode_example needs eps > 0 and a > -1");
    } else if (m == "cutoff_capacity") {
      if (sc.params.has(param_key(m, "deltas"))) {
        for (double d : sc.params.get_doubles(param_key(m, "deltas"))) {
          if (!(d > 0.0 && d < 1.0)) incompatible("cutoff needs 0 < delta < 1");
        }
      }
    }
  }
  switch (sc.problem) {
    case ProblemKind::neumann_special:
      if (!(a > -1.0 && a < 1.0)) incompatible("Neumann data on y = 0 needs a in (-1, 1)");
      if (!sc.half || sc.symmetry != Symmetry::even) incompatible("neumann_special needs an even half grid");
      break;
    case ProblemKind::odd_harmonic:
      if (!sc.half || sc.symmetry != Symmetry::odd) incompatible("odd_harmonic needs an odd half grid");
      if (!(a < 1.0)) incompatible("odd_harmonic data needs a < 1");
      break;
    case ProblemKind::even_harmonic:
    case ProblemKind::manufactured_y2:
    case ProblemKind::constant_f:
      if (sc.half && sc.symmetry != Symmetry::even) incompatible(std::string(to_string(sc.problem)) + " needs an even grid");
      if (!(a > -1.0)) incompatible("solves need a > -1");
      break;
    case ProblemKind::none:
      break;
  }
}

}  // namespace

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::none: return "none";
    case ProblemKind::manufactured_y2: return "manufactured_y2";
    case ProblemKind::constant_f: return "constant_f";
    case ProblemKind::neumann_special: return "neumann_special";
    case ProblemKind::odd_harmonic: return "odd_harmonic";
    case ProblemKind::even_harmonic: return "even_harmonic";
  }
  return "none";
}

Scenario parse_scenario(const Config& cfg) {
  Scenario sc;
  sc.params = cfg;
  const Config& c = sc.params;
  sc.name = c.get_string("scenario.name");
  for (char ch : sc.name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')) {
      throw ConfigError(c.line_of("scenario.name"), "scenario.name", "use letters, digits, '-' and '_'");
    }
  }
  sc.seed = c.get_u64("scenario.seed", 1);
  const std::string mode = c.get_string("scenario.mode", "run");
  if (mode == "run") sc.mode = RunMode::run;
  else if (mode == "sweep") sc.mode = RunMode::sweep;
  else if (mode == "refine") sc.mode = RunMode::refine;
  else throw ConfigError(c.line_of("scenario.mode"), "scenario.mode", "expected run, sweep or refine");

  sc.weight.a = c.get_double("weight.a", 0.0);
  sc.weight.eps = c.get_double("weight.eps", 0.0);
  sc.weight.normalized = c.get_bool("weight.normalized", false);
  if (!(sc.weight.eps >= 0.0)) throw ConfigError(c.line_of("weight.eps"), "weight.eps", "eps must be >= 0");

  sc.n = static_cast<int>(c.get_int("grid.n", 1));
  for (double v : c.get_doubles("grid.cells")) {
    if (v != std::floor(v)) throw ConfigError(c.line_of("grid.cells"), "grid.cells", "cell counts are integers");
    sc.cells.push_back(static_cast<int>(v));
  }
  sc.half = c.get_bool("grid.half", true);
  sc.symmetry = parse_symmetry(c.get_string("grid.symmetry", sc.half ? "even" : "none"));
  try {
    scenario_grid(sc);
  } catch (const Error& e) {
    throw ConfigError(c.line_of("grid.cells"), "grid", e.what());
  }

  sc.problem = parse_problem(c.get_string("problem.kind", "none"), c.line_of("problem.kind"));
  sc.f_value = c.get_double("problem.f", 1.0);
  sc.flux = c.get_double("problem.flux", 1.0);

  sc.measurements = c.get_strings("measurements");
  if (sc.measurements.empty()) throw ConfigError(c.line_of("measurements"), "measurements", "empty measurement list");
  for (std::size_t i = 0; i < sc.measurements.size(); ++i) {
    spec_of(sc.measurements[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (sc.measurements[i] == sc.measurements[j]) {
        throw ConfigError(c.line_of("measurements"), "measurements", "duplicate measurement '" + sc.measurements[i] + "'");
      }
    }
  }

  if (c.has("sweep.eps")) sc.sweep_eps = c.get_doubles("sweep.eps");
  if (c.has("sweep.a")) sc.sweep_a = c.get_doubles("sweep.a");
  sc.refine_levels = static_cast<int>(c.get_int("refine.levels", 3));
  sc.max_cells = static_cast<std::size_t>(c.get_int("refine.max_cells", static_cast<long long>(sc.max_cells)));

  // measure.<m>.<param> and measure.<m>.<output>.<check>
  for (const auto& key : c.keys()) {
    if (key.rfind("measure.", 0) != 0) continue;
    const std::string rest = key.substr(8);
    const auto dot = rest.find('.');
    const std::string m = rest.substr(0, dot);
    if (std::find(sc.measurements.begin(), sc.measurements.end(), m) == sc.measurements.end()) {
      throw ConfigError(c.line_of(key), key, "measurement '" + m + "' is not listed");
    }
    const std::string tail = dot == std::string::npos ? "" : rest.substr(dot + 1);
    const auto& spec = spec_of(m);
    bool ok = std::find(spec.params.begin(), spec.params.end(), tail) != spec.params.end();
    const auto dot2 = tail.find('.');
    if (!ok && dot2 != std::string::npos) {
      const std::string out = tail.substr(0, dot2);
      const std::string kind = tail.substr(dot2 + 1);
      ok = std::find(spec.outputs.begin(), spec.outputs.end(), out) != spec.outputs.end() &&
           std::find(check_kinds().begin(), check_kinds().end(), kind) != check_kinds().end();
      if (ok) c.get_double(key);
    }
    if (!ok) throw ConfigError(c.line_of(key), key, "unknown key");
    c.has(key);
  }
  c.reject_unused();

  if (sc.mode == RunMode::sweep) {
    if (sc.sweep_eps.empty() && sc.sweep_a.empty()) {
      throw ConfigError(0, "sweep.eps", "sweep mode needs sweep.eps or sweep.a");
    }
    for (std::size_t k = 0; k < sc.sweep_eps.size(); ++k) {
      if (!(sc.sweep_eps[k] >= 0.0)) throw ConfigError(c.line_of("sweep.eps"), "sweep.eps", "eps values must be >= 0");
      if (k > 0 && !(sc.sweep_eps[k] < sc.sweep_eps[k - 1])) {
        throw ConfigError(c.line_of("sweep.eps"), "sweep.eps", "eps values must be descending");
      }
    }
  }
  if (sc.mode == RunMode::refine) {
    if (sc.refine_levels < 3) throw ConfigError(c.line_of("refine.levels"), "refine.levels", "need at least 3 levels");
    std::size_t cells = 1;
    for (int v : sc.cells) cells *= static_cast<std::size_t>(v) << (sc.refine_levels - 1);
    if (cells > sc.max_cells) {
      throw Error(ErrorKind::memory_guard, "finest refinement level exceeds refine.max_cells");
    }
  }

  const std::vector<double> as = sc.sweep_a.empty() ? std::vector<double>{sc.weight.a} : sc.sweep_a;
  const std::vector<double> es = sc.sweep_eps.empty() ? std::vector<double>{sc.weight.eps} : sc.sweep_eps;
  for (double a : sc.mode == RunMode::sweep ? as : std::vector<double>{sc.weight.a}) {
    for (double e : sc.mode == RunMode::sweep ? es : std::vector<double>{sc.weight.eps}) {
      check_measurement_ranges(sc, a, e);
    }
  }
  return sc;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Report run_once(const Scenario& sc) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.scenario = sc.name;
  std::vector<Table> extras;
  const auto values = measure_all(sc, sc.weight, scenario_grid(sc), &extras);
  Table main{sc.name, {}, {{}}};
  for (const auto& [k, v] : values) {
    main.columns.push_back(k);
    main.rows[0].push_back(v);
  }
  rep.tables.push_back(std::move(main));
  for (auto& t : extras) {
    t.name = sc.name + "_" + t.name;
    rep.tables.push_back(std::move(t));
  }
  add_point_checks(sc, rep.tables[0], {0}, rep);
  rep.runtime_seconds = elapsed_since(t0);
  return rep;
}

Report sweep_eps(const Scenario& sc, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> as = sc.sweep_a.empty() ? std::vector<double>{sc.weight.a} : sc.sweep_a;
  const std::vector<double> es = sc.sweep_eps.empty() ? std::vector<double>{sc.weight.eps} : sc.sweep_eps;
  std::vector<std::pair<double, double>> points;
  for (double a : as) {
    for (double e : es) points.emplace_back(a, e);
  }
  std::vector<Values> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::size_t next = 0;
  std::mutex mtx;
  auto worker = [&]() {
    for (;;) {
      std::size_t k;
      {
        std::lock_guard<std::mutex> lock(mtx);
        if (next >= points.size()) return;
        k = next++;
      }
      try {
        const Scenario local = sc;  // Config lookups record keys, so no sharing across threads
        const WeightParams w{points[k].first, points[k].second, sc.weight.normalized};
        results[k] = measure_all(local, w, scenario_grid(local), nullptr);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(points.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Report rep;
  rep.scenario = sc.name;
  Table t{sc.name, {"a", "eps"}, {}};
  for (const auto& kv : results.front()) t.columns.push_back(kv.first);
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::vector<double> row{points[k].first, points[k].second};
    for (const auto& kv : results[k]) row.push_back(kv.second);
    t.rows.push_back(std::move(row));
  }
  std::vector<std::size_t> all(t.rows.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  add_point_checks(sc, t, all, rep);
  for (std::size_t c = 2; c < t.columns.size(); ++c) {
    const auto bound = sc.params.find_double("measure." + t.columns[c] + ".max_ratio");
    if (!bound) continue;
    double worst = 0.0;
    for (double a : as) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = 0.0;
      for (const auto& row : t.rows) {
        if (row[0] != a) continue;
        lo = std::min(lo, std::abs(row[c]));
        hi = std::max(hi, std::abs(row[c]));
      }
      worst = std::max(worst, hi / lo);
    }
    rep.checks.push_back({t.columns[c], "max_ratio", worst, *bound, worst <= *bound});
  }
  rep.tables.push_back(std::move(t));
  rep.runtime_seconds = elapsed_since(t0);
  return rep;
}

Report refine(const Scenario& sc) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.scenario = sc.name;
  Table t{sc.name, {"level", "h"}, {}};
  std::vector<Values> results;
  std::vector<double> hs;
  for (int level = 0; level < sc.refine_levels; ++level) {
    const GridPtr g = scenario_grid(sc, level);
    hs.push_back(g->h(g->yaxis()));
    results.push_back(measure_all(sc, sc.weight, g, nullptr));
  }
  std::vector<std::size_t> rated;
  for (std::size_t c = 0; c < results[0].size(); ++c) {
    const std::string& name = results[0][c].first;
    t.columns.push_back(name);
    if (name.find("error") != std::string::npos || name.find("residual") != std::string::npos ||
        sc.params.has("measure." + name + ".min_rate")) {
      rated.push_back(c);
    }
  }
  for (std::size_t c : rated) t.columns.push_back("rate_" + results[0][c].first);
  for (int level = 0; level < sc.refine_levels; ++level) {
    std::vector<double> row{static_cast<double>(level), hs[static_cast<std::size_t>(level)]};
    for (const auto& kv : results[static_cast<std::size_t>(level)]) row.push_back(kv.second);
    for (std::size_t c : rated) {
      row.push_back(level == 0 ? kNaN
                               : std::log2(results[static_cast<std::size_t>(level - 1)][c].second /
                                           results[static_cast<std::size_t>(level)][c].second));
    }
    t.rows.push_back(std::move(row));
  }
  add_point_checks(sc, t, {t.rows.size() - 1}, rep);
  for (std::size_t k = 0; k < rated.size(); ++k) {
    const std::string& name = results[0][rated[k]].first;
    const auto bound = sc.params.find_double("measure." + name + ".min_rate");
    if (!bound) continue;
    const std::size_t col = 2 + results[0].size() + k;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r < t.rows.size(); ++r) worst = std::min(worst, t.rows[r][col]);
    rep.checks.push_back({"rate_" + name, "min_rate", worst, *bound, worst >= *bound});
  }
  rep.tables.push_back(std::move(t));
  rep.runtime_seconds = elapsed_since(t0);
  return rep;
}

Report execute(const Scenario& sc, const RunOptions& opts) {
  switch (sc.mode) {
    case RunMode::run: return run_once(sc);
    case RunMode::sweep: return sweep_eps(sc, opts);
    case RunMode::refine: return refine(sc);
  }
  return run_once(sc);
}

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_table(const Table& t, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::config_invalid, "cannot write " + path.string());
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_value(row[c]);
    os << "\n";
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_table(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config_invalid, "cannot read " + path.string());
  Table t{name, {}, {}};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::config_invalid, path.string() + " has no header");
  t.columns = split_csv(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split_csv(line)) row.push_back(std::strtod(cell.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

void write_report(const Report& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt");
  manifest << "scenario " << rep.scenario << "\n";
  for (const auto& t : rep.tables) {
    write_table(t, dir / (t.name + ".csv"));
    manifest << "table " << t.name << "\n";
  }
  std::ofstream checks(dir / "checks.csv");
  checks << "column,kind,value,bound,pass\n";
  for (const auto& c : rep.checks) {
    checks << c.column << "," << c.kind << "," << format_value(c.value) << "," << format_value(c.bound)
           << "," << (c.pass ? 1 : 0) << "\n";
  }
  std::ofstream summary(dir / "summary.txt");
  summary << render_summary(rep, true);
}

Report read_report(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.txt");
  if (!manifest) throw Error(ErrorKind::config_invalid, "no manifest.txt in " + dir.string());
  Report rep;
  std::string word, name;
  while (manifest >> word >> name) {
    if (word == "scenario") rep.scenario = name;
    else if (word == "table") rep.tables.push_back(read_table(dir / (name + ".csv"), name));
  }
  const Table checks = read_table(dir / "checks.csv", "checks");
  std::ifstream raw(dir / "checks.csv");
  std::string line;
  std::getline(raw, line);
  while (std::getline(raw, line)) {
    const auto cells = split_csv(line);
    if (cells.size() != 5) continue;
    rep.checks.push_back({cells[0], cells[1], std::strtod(cells[2].c_str(), nullptr),
                          std::strtod(cells[3].c_str(), nullptr), cells[4] == "1"});
  }
  return rep;
}

std::string render_summary(const Report& rep, bool with_runtime) {
  std::ostringstream os;
  os << "scenario: " << rep.scenario << "\n";
  for (const auto& t : rep.tables) {
    os << "table " << t.name << ": " << t.rows.size() << " rows x " << t.columns.size() << " columns\n";
  }
  if (!rep.tables.empty()) {
    const Table& t = rep.tables.front();
    for (const auto& row : t.rows) {
      os << " ";
      for (std::size_t c = 0; c < row.size(); ++c) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " %s=%.6g", t.columns[c].c_str(), row[c]);
        os << buf;
      }
      os << "\n";
    }
  }
  for (const auto& c : rep.checks) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %s %s: %.6g vs %.6g\n", c.pass ? "PASS" : "FAIL", c.column.c_str(),
                  c.kind.c_str(), c.value, c.bound);
    os << buf;
  }
  os << "result: " << (rep.passed() ? "pass" : "fail") << "\n";
  if (with_runtime) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime: %.3f s\n", rep.runtime_seconds);
    os << buf;
  }
  return os.str();
}

std::vector<std::string> bundled_scenarios() {
  std::vector<std::string> out;
  for (const auto& kv : detail::bundled_scenario_table()) out.push_back(kv.first);
  return out;
}

std::string bundled_scenario(const std::string& name) {
  for (const auto& kv : detail::bundled_scenario_table()) {
    if (kv.first == name) return kv.second;
  }
  throw Error(ErrorKind::unknown_name, "no bundled scenario '" + name + "'");
}

}  // namespace rholab
