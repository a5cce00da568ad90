#pragma once

// Scenario files, the measurement catalogue and report serialization behind
// the `rholab` command line tool.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rholab/config.hpp"
#include "rholab/mesh.hpp"
#include "rholab/weights.hpp"

namespace rholab {

enum class ProblemKind { none, manufactured_y2, constant_f, neumann_special, odd_harmonic, even_harmonic };

const char* to_string(ProblemKind kind);

enum class RunMode { run, sweep, refine };

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  RunMode mode = RunMode::run;
  WeightParams weight;
  int n = 1;
  std::vector<int> cells;
  bool half = true;
  Symmetry symmetry = Symmetry::even;
  ProblemKind problem = ProblemKind::none;
  double f_value = 1.0;
  double flux = 1.0;
  std::vector<std::string> measurements;
  std::vector<double> sweep_eps;
  std::vector<double> sweep_a;
  int refine_levels = 3;
  std::size_t max_cells = std::size_t{1} << 22;
  /// Remaining measure.* keys, looked up while measuring.
  Config params;
};

/// Reads and validates a scenario; ConfigError for malformed or unknown keys,
/// Error(measurement_incompatible) for measurements outside their hypotheses.
Scenario parse_scenario(const Config& cfg);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Check {
  std::string column;
  std::string kind;  // max, min, max_ratio, min_rate
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct Report {
  std::string scenario;
  std::vector<Table> tables;  // tables[0] is the main table
  std::vector<Check> checks;
  double runtime_seconds = 0.0;

  bool passed() const;
};

struct RunOptions {
  int threads = 1;
};

/// Dispatches on scenario.mode.
Report execute(const Scenario& scenario, const RunOptions& opts = {});
Report run_once(const Scenario& scenario);
/// One row per (a, eps) pair, eps descending within each a.
Report sweep_eps(const Scenario& scenario, const RunOptions& opts = {});
/// Cells double per level; error-like columns get a rate column.
Report refine(const Scenario& scenario);

/// CSV per table, checks.csv and summary.txt (the only file with timing).
void write_report(const Report& report, const std::filesystem::path& dir);
Report read_report(const std::filesystem::path& dir);
std::string render_summary(const Report& report, bool with_runtime);

/// Scenario texts shipped with the library (also in scenarios/).
std::vector<std::string> bundled_scenarios();
std::string bundled_scenario(const std::string& name);

}  // namespace rholab
