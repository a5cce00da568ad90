#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rholab/error.hpp"
#include "rholab/experiments.hpp"
#include "rholab/weights.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kToleranceFailure = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  bool strict = false;
};

rholab::Config load_config(const std::string& what) {
  // A bare name that is not a file refers to a bundled scenario.
  if (!std::filesystem::exists(what)) {
    for (const auto& name : rholab::bundled_scenarios()) {
      if (name == what) return rholab::Config::parse_string(rholab::bundled_scenario(name));
    }
  }
  return rholab::Config::load(what);
}

int run_scenario(const Common& c, const char* forced_mode) {
  rholab::Config cfg = load_config(c.config);
  if (forced_mode) cfg.set("scenario.mode", forced_mode);
  rholab::Scenario sc = rholab::parse_scenario(cfg);
  if (c.seed_set) sc.seed = c.seed;
  const rholab::Report rep = rholab::execute(sc, {c.threads});
  const std::filesystem::path out = c.out.empty() ? std::filesystem::path("results") / sc.name : std::filesystem::path(c.out);
  rholab::write_report(rep, out);
  std::cout << rholab::render_summary(rep, true) << "written to " << out.string() << "\n";
  return (c.strict && !rep.passed()) ? kToleranceFailure : kPass;
}

int dump_catalog(const std::string& name, double a, double eps, int samples) {
  const rholab::SolutionId id = rholab::parse_solution_id(name);
  const rholab::WeightParams w{a, eps, false};
  if (samples < 1) throw rholab::Error(rholab::ErrorKind::out_of_range, "--samples must be positive");
  std::printf("y,value\n");
  for (int k = 0; k < samples; ++k) {
    const double y = -1.0 + 2.0 * (k + 0.5) / samples;
    const double z[2] = {0.0, y};
    std::printf("%.16e,%.16e\n", y, rholab::catalog(id, w, z));
  }
  return kPass;
}

bool is_config_kind(rholab::ErrorKind k) {
  using rholab::ErrorKind;
  return k == ErrorKind::config_invalid || k == ErrorKind::measurement_incompatible ||
         k == ErrorKind::unknown_name || k == ErrorKind::out_of_range || k == ErrorKind::memory_guard;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted degenerate elliptic experiments"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("config", common.config, "scenario file or bundled scenario name")->required();
    sub->add_option("--out", common.out, "output directory (default results/<scenario>)");
    sub->add_option("--seed", common.seed, "override scenario.seed")
        ->each([&common](const std::string&) { common.seed_set = true; });
    sub->add_option("--threads", common.threads, "concurrent sweep points")->check(CLI::PositiveNumber);
    sub->add_flag("--strict", common.strict, "exit 1 if any tolerance check fails");
  };
  auto* run = app.add_subcommand("run", "run a scenario as configured");
  auto* sweep = app.add_subcommand("sweep", "run a scenario as an (a, eps) sweep");
  auto* refine = app.add_subcommand("refine", "run a scenario as a refinement study");
  add_common(run);
  add_common(sweep);
  add_common(refine);

  std::string name;
  double a = 0.0, eps = 0.0;
  int samples = 21;
  auto* cat = app.add_subcommand("catalog", "print an analytic solution along x = 0");
  cat->add_option("name", name, "odd_singular, jump, cutoff(delta), neumann_special, u_bar, constant")->required();
  cat->add_option("--a", a);
  cat->add_option("--eps", eps);
  cat->add_option("--samples", samples);

  std::string dir;
  auto* report = app.add_subcommand("report", "re-render summary of a result directory");
  report->add_option("dir", dir)->required();

  auto* list = app.add_subcommand("list", "names of bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*run) return run_scenario(common, nullptr);
    if (*sweep) return run_scenario(common, "sweep");
    if (*refine) return run_scenario(common, "refine");
    if (*cat) return dump_catalog(name, a, eps, samples);
    if (*report) {
      const rholab::Report rep = rholab::read_report(dir);
      std::cout << rholab::render_summary(rep, false);
      return kPass;
    }
    if (*list) {
      for (const auto& n : rholab::bundled_scenarios()) std::cout << n << "\n";
      return kPass;
    }
  } catch (const rholab::Error& e) {
    std::cerr << "rholab: " << e.what() << "\n";
    return is_config_kind(e.kind()) ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "rholab: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kPass;
}
