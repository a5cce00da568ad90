#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rholab/assembly.hpp"
#include "rholab/error.hpp"
#include "rholab/frequency.hpp"
#include "rholab/solver.hpp"

using namespace rholab;

namespace {
FrequencyProfile analytic_y(const WeightParams& w, std::span<const double> radii) {
  return compute_HE([](std::span<const double> z) { return z[1]; },
                    [](std::span<const double>, std::span<double> g) {
                      g[0] = 0.0;
                      g[1] = 1.0;
                    },
                    1, w, radii);
}
}  // namespace

TEST_CASE("closed-form profiles") {
  const auto radii = log_radii(0.1, 0.9, 9);
  const auto one = compute_HE([](std::span<const double>) { return 1.0; },
                              [](std::span<const double>, std::span<double> g) { g[0] = g[1] = 0.0; }, 1,
                              {0.0, 0.0, false}, radii);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    CHECK(one.H[k] == doctest::Approx(M_PI));
    CHECK(one.E[k] == 0.0);
  }
  CHECK_FALSE(one.vanishes_on_sigma);
  CHECK_THROWS_AS(check_derivative_relation(one), Error);
  CHECK(growth_exponent(one) == doctest::Approx(0.0).scale(1.0));

  const auto y = analytic_y({0.0, 0.0, false}, radii);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    CHECK(y.H[k] == doctest::Approx(M_PI / 2 * r * r));
    CHECK(y.E[k] == doctest::Approx(M_PI / 2 * r * r));
  }
  CHECK(check_derivative_relation(y) <= 1e-10);
  CHECK(growth_exponent(y) == doctest::Approx(2.0));
}

TEST_CASE("scaling leaves relation and growth unchanged") {
  auto g = build_grid(1, {128, 64}, true, Symmetry::odd);
  const WeightParams w{0.5, 0.0, false};
  const SolutionId os{SolutionKind::odd_singular, 0.0};
  const Field u = sample(g, [&](std::span<const double> z) { return catalog(os, w, z); });
  Field v = u;
  for (auto& x : v.values) x *= 3.0;
  const auto radii = log_radii(8 * g->h(0), 0.8, 10);
  const auto pu = compute_HE(u, w, radii), pv = compute_HE(v, w, radii);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    CHECK(pv.H[k] == doctest::Approx(9 * pu.H[k]));
    CHECK(pv.E[k] == doctest::Approx(9 * pu.E[k]));
  }
  CHECK(growth_exponent(pv) == doctest::Approx(growth_exponent(pu)));
  CHECK(growth_exponent(pu) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("Liouville lower bound for odd discrete harmonics") {
  auto g = build_grid(1, {128, 64}, true, Symmetry::odd);
  for (double a : {-0.5, 0.0, 0.5}) {
    const WeightParams w{a, 0.0, false};
    auto data = [a](std::span<const double> z) {
      return std::pow(z[1], 1 - a) * (1 + z[0] + z[0] * z[0] - z[1] * z[1] / (3 - a));
    };
    ProblemSpec s;
    s.weight = w;
    s.bc.lateral = BoundaryCondition::dirichlet(data);
    s.bc.top = BoundaryCondition::dirichlet(data);
    const Field u = solve(assemble(s, g));
    const auto p = compute_HE(u, w, log_radii(8 * g->h(0), 0.8, 10));
    CHECK(growth_exponent(p) >= 2 * (1 - a) - 0.1);
    CHECK(check_derivative_relation(p) <= 0.05);
  }
}

TEST_CASE("preconditions") {
  auto g = build_grid(1, {32, 16}, true, Symmetry::odd);
  const Field u(g, 0.0);
  CHECK_THROWS_AS(compute_HE(u, {0.0, 0.0, false}, std::vector<double>{0.01, 0.5}), Error);
  CHECK_THROWS_AS(compute_HE(u, {0.0, 0.3, false}, std::vector<double>{0.5, 0.6}), Error);
  const auto radii = log_radii(0.1, 0.9, 9);
  const auto eps1 = analytic_y({0.5, 1.0, false}, radii);
  CHECK_THROWS_AS(check_derivative_relation(eps1), Error);
}

TEST_CASE("profile CSV") {
  const auto p = analytic_y({0.0, 0.0, false}, log_radii(0.2, 0.8, 5));
  std::ostringstream os;
  write_csv(os, p);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,H,E,dH_dr,two_E_over_r");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 5);
}
