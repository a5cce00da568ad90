#include <doctest.h>

#include <cmath>

#include "rholab/error.hpp"
#include "rholab/mesh.hpp"

using namespace rholab;

TEST_CASE("grid construction") {
  auto g = build_grid(1, {8, 8}, true, Symmetry::even);
  CHECK(g->size() == 64);
  CHECK(g->center(1, 0) == doctest::Approx(1.0 / 16));
  CHECK(g->lo(0) == -1.0);
  CHECK(g->hi(1) == doctest::Approx(1.0));
  auto f = build_grid(1, {8, 16}, false, Symmetry::none);
  CHECK(f->size() == 128);
  CHECK(f->lo(1) == -1.0);
  CHECK(f->sigma_row() == 8);
  auto t = build_grid(2, {4, 4, 4}, true, Symmetry::even);
  CHECK(t->size() == 64);
  CHECK(t->dim() == 3);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(g->center(i)[1] > 0.0);
    CHECK(g->index(g->coords(i)) == i);
  }
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(build_grid(1, {3, 8}, true, Symmetry::even), Error);
  CHECK_THROWS_AS(build_grid(1, {8, 8}, false, Symmetry::odd), Error);
  CHECK_THROWS_AS(build_grid(1, {8, 8}, true, Symmetry::none), Error);
  CHECK_THROWS_AS(build_grid(3, {8, 8, 8, 8}, true, Symmetry::even), Error);
  CHECK_THROWS_AS(build_grid(1, {8, 8, 8}, true, Symmetry::even), Error);
}

TEST_CASE("reflection") {
  auto g = build_grid(1, {8, 8}, true, Symmetry::even);
  const Field one(g, 1.0);
  const Field r1 = reflect(one, Symmetry::even);
  for (double v : r1.values) CHECK(v == 1.0);
  const Field y = sample(g, [](std::span<const double> z) { return z[1]; });
  const Field odd = reflect(y, Symmetry::odd);
  const Field yfull = sample(odd.grid, [](std::span<const double> z) { return z[1]; });
  CHECK(max_abs_difference(odd, yfull) == 0.0);
  const Field abs_y = reflect(restrict_to_half(odd, Symmetry::odd), Symmetry::even);
  const Field oracle = sample(odd.grid, [](std::span<const double> z) { return std::abs(z[1]); });
  CHECK(max_abs_difference(abs_y, oracle) == 0.0);
  const Field u = sample(g, [](std::span<const double> z) { return std::sin(3 * z[0]) + z[1]; });
  CHECK(max_abs_difference(restrict_to_half(reflect(u, Symmetry::even), Symmetry::even), u) == 0.0);
}

TEST_CASE("sigma faces match brute-force enumeration") {
  auto g = build_grid(1, {8, 4}, true, Symmetry::odd);
  for (double r : {0.3, 0.5, 1.0}) {
    const auto faces = g->sigma_faces(r);
    std::vector<std::size_t> brute;
    for (int i = 0; i < 8; ++i) {
      if (std::abs(g->center(0, i)) < r) brute.push_back(static_cast<std::size_t>(i));
    }
    CHECK(faces == brute);
  }
  const auto ball = g->ball_mask(0.5);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto c = g->center(i);
    CHECK(static_cast<bool>(ball[i]) == (std::hypot(c[0], c[1]) < 0.5));
  }
}
