#include <doctest.h>

#include <cmath>

#include "rholab/assembly.hpp"
#include "rholab/error.hpp"
#include "rholab/solver.hpp"

using namespace rholab;

TEST_CASE("identity system") {
  SparseMatrix I;
  I.dim = 5;
  for (std::size_t r = 0; r <= 5; ++r) I.row_ptr.push_back(r);
  for (std::size_t r = 0; r < 5; ++r) {
    I.col.push_back(r);
    I.val.push_back(1.0);
  }
  const std::vector<double> b = {1, -2, 3, 0.5, 7};
  for (auto pc : {Preconditioner::none, Preconditioner::jacobi}) {
    const auto x = solve_vector(I, b, {1e-10, 0, pc});
    for (std::size_t i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(b[i]));
  }
}

TEST_CASE("zero right-hand side gives zero") {
  auto g = build_grid(1, {8, 8}, true, Symmetry::even);
  const Field u = solve(assemble(ProblemSpec{}, g));
  for (double v : u.values) CHECK(v == 0.0);
}

namespace {
double poisson_error(int N, double a, double eps) {
  auto g = build_grid(1, {N, N}, true, Symmetry::even);
  ProblemSpec s;
  s.weight = {a, eps, false};
  s.rhs = RhsKind::volumetric;
  s.f = sample(g, [a, eps](std::span<const double> z) {
    const double y = z[1];
    return eps == 0.0 ? -2.0 * (1.0 + a) : -2.0 - 2.0 * a * y * y / (eps * eps + y * y);
  });
  auto yy = [](std::span<const double> z) { return z[1] * z[1]; };
  s.bc = {BoundaryCondition::dirichlet(yy), BoundaryCondition::dirichlet(yy), BoundaryCondition::dirichlet(yy)};
  SolveStats stats;
  const auto sys = assemble(s, g);
  const Field u = solve(sys, {}, &stats);
  CHECK(stats.relative_residual <= 1e-10);
  return max_abs_difference(u, sample(g, yy));
}
}  // namespace

TEST_CASE("manufactured y^2 and refinement") {
  CHECK(poisson_error(16, 0.0, 0.0) < 1e-3);
  for (double eps : {0.1, 0.0}) {
    const double e1 = poisson_error(16, 0.5, eps);
    const double e2 = poisson_error(32, 0.5, eps);
    CHECK(e1 / e2 >= (eps > 0 ? 3.5 : 2.0));
  }
}

TEST_CASE("residual contract after solve") {
  auto g = build_grid(1, {16, 16}, true, Symmetry::even);
  ProblemSpec s;
  s.weight = {0.5, 0.0, false};
  s.rhs = RhsKind::volumetric;
  s.f = Field(g, 1.0);
  const auto sys = assemble(s, g);
  const Field u = solve(sys);
  const Field Su = apply(sys, u);
  double rn = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < Su.size(); ++i) {
    const double r = sys.rhs[i] - Su[i];
    rn += r * r;
    bn += sys.rhs[i] * sys.rhs[i];
  }
  CHECK(std::sqrt(rn) <= 1e-10 * std::sqrt(bn));
}

TEST_CASE("iteration cap raises NoConvergence") {
  auto g = build_grid(1, {32, 32}, true, Symmetry::even);
  ProblemSpec s;
  s.rhs = RhsKind::volumetric;
  s.f = Field(g, 1.0);
  CHECK_THROWS_AS(solve(assemble(s, g), {1e-10, 3}), NoConvergence);
}

TEST_CASE("solve is deterministic") {
  auto g = build_grid(1, {16, 16}, true, Symmetry::even);
  ProblemSpec s;
  s.weight = {-0.5, 0.0, false};
  s.rhs = RhsKind::volumetric;
  s.f = sample(g, [](std::span<const double> z) { return std::cos(3 * z[0]); });
  const auto sys = assemble(s, g);
  CHECK(solve(sys).values == solve(sys).values);
}
