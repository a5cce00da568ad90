#include <doctest.h>

#include <cmath>

#include "rholab/assembly.hpp"
#include "rholab/calculus.hpp"
#include "rholab/solver.hpp"

using namespace rholab;

namespace {
double max_abs(const Field& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}
}  // namespace

TEST_CASE("weighted derivative") {
  auto g = build_grid(1, {8, 16}, true, Symmetry::even);
  const Field u = sample(g, [](std::span<const double> z) { return 1.0 + z[0] + z[1] * z[1]; });
  for (double a : {-0.5, 0.5, 2.0}) {
    const auto W = weighted_dy(u, {a, 0.0, false});
    for (std::size_t c = 0; c < W.columns(); ++c) CHECK(W.at(c, 0) == 0.0);
  }
  const auto W = weighted_dy(u, {0.0, 0.0, false});
  const double h = g->h(1);
  for (std::size_t c = 0; c < W.columns(); ++c) {
    for (int j = 1; j < W.faces(); ++j) CHECK(W.at(c, j) == doctest::Approx(2.0 * j * h));
  }
  auto pos = build_grid(1, {8, 16}, true, Symmetry::odd);
  const Field logy = sample(pos, [](std::span<const double> z) { return std::log(z[1]); });
  const auto L = weighted_dy(logy, {1.0, 0.0, false}, FaceRule::flux_exact);
  for (std::size_t c = 0; c < L.columns(); ++c) {
    for (int j = 1; j < L.faces() - 1; ++j) CHECK(L.at(c, j) == doctest::Approx(1.0));
  }
  const auto M = weighted_dy(logy, {1.0, 0.0, false});
  CHECK(M.at(0, 8) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("G operator") {
  auto g = build_grid(1, {8, 16}, true, Symmetry::even);
  const Field y2 = sample(g, [](std::span<const double> z) { return z[1] * z[1]; });
  const Field G = op_G(y2);
  for (double v : G.values) CHECK(v == doctest::Approx(2.0));
  CHECK(max_abs(op_G(Field(g, 3.0))) == 0.0);
  auto fine = build_grid(1, {8, 64}, true, Symmetry::even);
  const Field y4 = sample(fine, [](std::span<const double> z) { return std::pow(z[1], 4); });
  const Field G4 = op_G(y4);
  const double h = fine->h(1);
  for (int j = 0; j < 63; ++j) {
    const double y = fine->center(1, j);
    CHECK(std::abs(G4[fine->index({2, j, 0})] - 4 * y * y) <= 4 * h * h);
  }
}

TEST_CASE("F_a operator") {
  auto g = build_grid(1, {8, 64}, true, Symmetry::even);
  const Field y2 = sample(g, [](std::span<const double> z) { return z[1] * z[1]; });
  const Field D = second_dy(y2);
  for (double v : D.values) CHECK(v == doctest::Approx(2.0));
  const double h = g->h(1);
  for (double a : {-0.5, 0.5, 1.5}) {
    const Field F = op_Fa(y2, {a, 0.0, false});
    for (int j = 2; j < 60; ++j) CHECK(std::abs(F[g->index({1, j, 0})] - 2 * (1 + a)) <= 10 * h * h);
  }
}

TEST_CASE("second derivative identity on smooth even fields") {
  auto g = build_grid(1, {32, 32}, true, Symmetry::even);
  const double h = g->h(1);
  const std::vector<PointFunction> fields = {
      [](std::span<const double> z) { return z[1] * z[1]; },
      [](std::span<const double> z) { return std::pow(z[1], 4); },
      [](std::span<const double> z) { return std::cos(M_PI * z[0]) * (1.0 + z[1] * z[1]); },
      [](std::span<const double> z) { return std::exp(z[0]) * std::cos(2 * z[1]); }};
  for (double a : {-0.5, 0.0, 0.5, 1.5}) {
    for (const auto& f : fields) {
      const Field u = sample(g, f);
      const Field F = op_Fa(u, {a, 0.0, false}), G = op_G(u), D = second_dy(u);
      for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(F[i] - a * G[i] - D[i]) <= 5 * h * h);
    }
  }
}

TEST_CASE("G from its right-hand side") {
  auto g = build_grid(1, {8, 32}, true, Symmetry::even);
  for (double a : {-0.5, 0.0, 1.0}) {
    const Field c = G_from_rhs(Field(g, 3.0), a);
    for (double v : c.values) CHECK(v == doctest::Approx(3.0 / (1 + a)));
    const Field t2 = G_from_rhs(sample(g, [](std::span<const double> z) { return z[1] * z[1]; }), a);
    for (int j = 0; j < 32; ++j) {
      const double y = g->center(1, j);
      CHECK(t2[g->index({0, j, 0})] == doctest::Approx(y * y / (a + 3)).epsilon(1e-2));
    }
  }
  const Field q = G_from_rhs(sample(g, [](std::span<const double> z) { return 1 + z[1] * z[1]; }), 0.0);
  for (int j = 0; j < 32; ++j) {
    const double y = g->center(1, j);
    CHECK(q[g->index({3, j, 0})] == doctest::Approx(1 + y * y / 3).epsilon(1e-3));
  }
}

TEST_CASE("duality transform") {
  auto odd = build_grid(1, {32, 16}, true, Symmetry::odd);
  for (double a : {-0.5, 0.5}) {
    for (double eps : {0.1, 1.0}) {
      const WeightParams p{a, eps, false};
      const SolutionId ub{SolutionKind::u_bar, 0.0};
      const auto d = duality_transform(sample(odd, [&](std::span<const double> z) { return catalog(ub, p, z); }), p);
      // the outermost row uses a one-sided face
      for (int j = 0; j < 15; ++j) {
        for (int i = 0; i < 32; ++i) CHECK(d.v[odd->index({i, j, 0})] == doctest::Approx(1.0).epsilon(1e-10));
      }
      CHECK(d.residual <= 1e-8);
      CHECK(d.v.grid->symmetry() == Symmetry::even);
    }
  }
  auto even = build_grid(1, {32, 16}, true, Symmetry::even);
  const auto c = duality_transform(Field(even, 2.0), {0.5, 0.0, false});
  CHECK(max_abs(c.v) == 0.0);
  CHECK(c.residual == 0.0);
}

TEST_CASE("at a = 0 the transform commutes with the discrete Laplacian") {
  auto data = [](std::span<const double> z) { return 1.0 + z[0] * z[0] - z[1] * z[1]; };
  std::vector<double> res;
  for (int N : {16, 32, 64}) {
    auto g = build_grid(1, {2 * N, N}, true, Symmetry::even);
    ProblemSpec s;
    s.bc = {BoundaryCondition::dirichlet(data), BoundaryCondition::dirichlet(data), BoundaryCondition::dirichlet(data)};
    res.push_back(duality_transform(solve(assemble(s, g)), s.weight).residual);
  }
  for (double r : res) CHECK(r <= 1e-7);
}
