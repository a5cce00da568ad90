#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rholab/error.hpp"
#include "rholab/experiments.hpp"

using namespace rholab;

namespace {

Scenario parse(const std::string& text) { return parse_scenario(Config::parse_string(text)); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kBase =
    "scenario.name = t\n"
    "grid.cells = [16, 8]\n";

}  // namespace

TEST_CASE("bundled scenarios parse") {
  const auto names = bundled_scenarios();
  CHECK(names.size() >= 6);
  for (const auto& n : names) {
    CAPTURE(n);
    CHECK_NOTHROW(parse_scenario(Config::parse_string(bundled_scenario(n))));
  }
  CHECK_THROWS_AS(bundled_scenario("nope"), Error);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(parse(std::string(kBase) + "measurements = []\n"), ConfigError);
  CHECK_THROWS_AS(parse(std::string(kBase) + "measurements = [bogus]\n"), ConfigError);
  CHECK_THROWS_AS(parse(std::string(kBase) + "measurements = [duality]\nmeasure.duality.color = red\n"), ConfigError);
  CHECK_THROWS_AS(parse(std::string(kBase) + "measurements = [duality]\nmeasure.holder.alpha = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse(std::string(kBase) + "measurements = [duality]\ngrid.colour = 1\n"), ConfigError);
  // Neumann flux outside (-1, 1)
  try {
    parse(std::string(kBase) + "weight.a = 1.2\nproblem.kind = neumann_special\nmeasurements = [solve_error_vs]\n");
    FAIL("expected incompatibility");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::measurement_incompatible);
  }
  // trace with a >= 1
  CHECK_THROWS_AS(parse(std::string(kBase) + "grid.symmetry = odd\nweight.a = 1\nmeasurements = [rayleigh]\n"), Error);
  // trace on an even grid
  CHECK_THROWS_AS(parse(std::string(kBase) + "measurements = [rayleigh]\n"), Error);
  // eps list must descend
  CHECK_THROWS_AS(parse(std::string(kBase) + "scenario.mode = sweep\nsweep.eps = [0, 1]\nmeasurements = [duality]\n"
                                             "measure.duality.field = y2\n"),
                  ConfigError);
  // moser below the exponent threshold
  CHECK_THROWS_AS(parse(std::string(kBase) + "problem.kind = constant_f\nmeasurements = [moser]\nmeasure.moser.p = 1\n"),
                  Error);
  // refinement memory guard
  try {
    parse(std::string(kBase) + "scenario.mode = refine\nrefine.levels = 3\nrefine.max_cells = 1000\n"
                               "problem.kind = manufactured_y2\nmeasurements = [solve_error_vs]\n");
    FAIL("expected memory guard");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::memory_guard);
  }
}

TEST_CASE("run writes tables, checks and summary") {
  const auto sc = parse(std::string(kBase) +
                        "problem.kind = manufactured_y2\nweight.a = 0.5\nweight.eps = 0.1\n"
                        "measurements = [solve_error_vs, identity_secondyy]\n"
                        "measure.identity_secondyy.field = y4\n"
                        "measure.solve_error_vs.max_error.max = 1e-2\n");
  const Report rep = execute(sc);
  CHECK(rep.passed());
  REQUIRE(rep.tables.size() == 1);
  CHECK(rep.tables[0].columns == std::vector<std::string>{"solve_error_vs.max_error",
                                                          "identity_secondyy.max_error_over_h2"});
  const auto dir = std::filesystem::temp_directory_path() / "rholab_test_run";
  std::filesystem::remove_all(dir);
  write_report(rep, dir);
  CHECK(std::filesystem::exists(dir / "t.csv"));
  CHECK(std::filesystem::exists(dir / "checks.csv"));
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  const Report back = read_report(dir);
  CHECK(back.scenario == "t");
  CHECK(back.tables[0].rows == rep.tables[0].rows);
  CHECK(render_summary(back, false) == render_summary(rep, false));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep at a = 0 gives identical rows, deterministic across threads") {
  const std::string text = std::string(kBase) +
                           "scenario.mode = sweep\nproblem.kind = constant_f\nweight.a = 0\n"
                           "sweep.eps = [1, 0.1, 0]\nmeasurements = [moser]\n";
  const Report one = execute(parse(text), {1});
  const Report many = execute(parse(text), {3});
  REQUIRE(one.tables[0].rows.size() == 3);
  CHECK(one.tables[0].rows.back()[1] == 0.0);
  for (const auto& row : one.tables[0].rows) CHECK(row[2] == one.tables[0].rows[0][2]);
  CHECK(one.tables[0].rows == many.tables[0].rows);
  const auto d1 = std::filesystem::temp_directory_path() / "rholab_sweep_1";
  const auto d2 = std::filesystem::temp_directory_path() / "rholab_sweep_2";
  write_report(one, d1);
  write_report(many, d2);
  CHECK(slurp(d1 / "t.csv") == slurp(d2 / "t.csv"));
  CHECK(slurp(d1 / "checks.csv") == slurp(d2 / "checks.csv"));
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("refinement rates") {
  const auto sc = parse(std::string(kBase) +
                        "scenario.mode = refine\nproblem.kind = manufactured_y2\nweight.a = 0.5\nweight.eps = 0.1\n"
                        "measurements = [solve_error_vs]\nmeasure.solve_error_vs.max_error.min_rate = 1.8\n");
  const Report rep = execute(sc);
  CHECK(rep.passed());
  CHECK(rep.tables[0].rows.size() == 3);
  CHECK(rep.tables[0].columns.back() == "rate_solve_error_vs.max_error");
}

TEST_CASE("cutoff energy table decreases for a = 1.5") {
  const auto sc = parse(std::string(kBase) + "weight.a = 1.5\nmeasurements = [cutoff_capacity]\n");
  const Report rep = execute(sc);
  REQUIRE(rep.tables.size() == 2);
  const auto& t = rep.tables[1];
  for (std::size_t r = 1; r < t.rows.size(); ++r) CHECK(t.rows[r][1] < t.rows[r - 1][1]);
}

TEST_CASE("CSV values use 17 significant digits") {
  const auto sc = parse(std::string(kBase) + "weight.a = 0.5\nweight.eps = 0.1\nmeasurements = [ode_example]\n");
  const auto dir = std::filesystem::temp_directory_path() / "rholab_test_csv";
  write_report(execute(sc), dir);
  const std::string text = slurp(dir / "t.csv");
  CHECK(text.find("-1.0000000000000000e+00") != std::string::npos);
  std::filesystem::remove_all(dir);
}
