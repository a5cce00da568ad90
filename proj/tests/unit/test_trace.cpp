#include <doctest.h>

#include <cmath>

#include "rholab/error.hpp"
#include "rholab/trace.hpp"

using namespace rholab;

TEST_CASE("trace quotient of u = y at a = 0 is 1") {
  auto g = build_grid(1, {128, 64}, true, Symmetry::odd);
  const Field u = sample_trial(g, [](std::span<const double> z) { return z[1]; });
  CHECK(rayleigh_trace(u, {0.0, 0.0, false}) == doctest::Approx(1.0).epsilon(0.01));
  const double hardy = rayleigh_hardy(u, {0.0, 0.0, false});
  CHECK(std::isfinite(hardy));
  CHECK(hardy > 0.0);
}

TEST_CASE("trials must vanish on y = 0") {
  auto g = build_grid(1, {32, 16}, true, Symmetry::odd);
  CHECK_THROWS_AS(sample_trial(g, [](std::span<const double>) { return 1.0; }), Error);
  auto even = build_grid(1, {32, 16}, true, Symmetry::even);
  const Field u(even, 1.0);
  CHECK_THROWS_AS(rayleigh_trace(u, {0.0, 0.0, false}), Error);
  const Field v(g, 0.0);
  CHECK_THROWS_AS(rayleigh_trace(sample_trial(g, [](std::span<const double> z) { return z[1]; }), {1.0, 0.0, false}),
                  Error);
  (void)v;
}

TEST_CASE("random trials respect the trace inequality at eps = 0") {
  auto g = build_grid(1, {64, 32}, true, Symmetry::odd);
  for (double a : {-0.5, 0.0, 0.5}) {
    for (int k = 0; k < 20; ++k) {
      const Field u = sample_trial(g, random_trial(500 + k, 1));
      CHECK(rayleigh_trace(u, {a, 0.0, false}) >= 1.0 - a - 0.05);
    }
  }
}

TEST_CASE("random trials are reproducible") {
  const auto f = random_trial(42, 1);
  const auto g = random_trial(42, 1);
  const double z[2] = {0.3, 0.4};
  CHECK(f(z) == g(z));
  CHECK(f(z) != random_trial(43, 1)(z));
}

TEST_CASE("minimize mode finds 1 - a") {
  auto g = build_grid(1, {64, 32}, true, Symmetry::odd);
  for (double a : {-0.5, 0.0, 0.5}) {
    CHECK(rayleigh_trace_min(g, {a, 0.0, false}) == doctest::Approx(1.0 - a).epsilon(0.1));
  }
}

TEST_CASE("mu-weighted trace and Hardy quotients") {
  auto g = build_grid(1, {64, 32}, true, Symmetry::odd);
  for (double eps : {0.0, 0.1, 1.0}) {
    for (int k = 0; k < 10; ++k) {
      const Field u = sample_trial(g, random_trial(900 + k, 1));
      CHECK(rayleigh_trace_mu(u, {0.5, eps, false}) >= 0.95);
      CHECK(rayleigh_hardy(u, {0.5, eps, false}) > 0.1);
    }
  }
}

TEST_CASE("stability quotient stays above 1 - a - 0.1 for small eps") {
  auto g = build_grid(1, {64, 32}, true, Symmetry::odd);
  for (double a : {-0.5, 0.5}) {
    for (int k = 0; k < 10; ++k) {
      const Field u = sample_trial(g, random_trial(1300 + k, 1));
      CHECK(stability_quotient(u, {a, 0.01, false}) >= 1.0 - a - 0.1);
    }
  }
}

TEST_CASE("three-dimensional trace quotient") {
  auto g = build_grid(2, {24, 24, 12}, true, Symmetry::odd);
  const Field u = sample_trial(g, [](std::span<const double> z) { return z[2]; });
  const double q = rayleigh_trace(u, {0.0, 0.0, false});
  // half ball: energy 2 pi / 3, boundary integral of y^2 is 2 pi / 3
  CHECK(q == doctest::Approx(1.0).epsilon(0.05));
}
