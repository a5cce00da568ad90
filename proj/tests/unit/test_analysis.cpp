#include <doctest.h>

#include <cmath>

#include "rholab/analysis.hpp"
#include "rholab/error.hpp"
#include "rholab/random.hpp"

using namespace rholab;

TEST_CASE("weighted Lp norms") {
  auto full = build_grid(1, {16, 16}, false, Symmetry::none);
  // [-1,1]^2 has area 4
  CHECK(weighted_lp(Field(full, 1.0), 2.0, {0.0, 0.0, false}, Region::whole()) == doctest::Approx(2.0));
  auto half = build_grid(1, {32, 64}, true, Symmetry::even);
  const double area = 2.0;
  const double h = half->h(1);
  CHECK(weighted_lp(Field(half, 1.0), 1.0, {1.0, 0.0, false}, Region::whole()) / area ==
        doctest::Approx(0.5).epsilon(h * h));
  const Field y = sample(half, [](std::span<const double> z) { return z[1]; });
  CHECK(weighted_lp(y, 2.0, {0.0, 0.0, false}, Region::whole()) / std::sqrt(area) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(h * h));
}

TEST_CASE("Holder exponent calibration") {
  auto g = build_grid(1, {128, 256}, true, Symmetry::even);
  const auto scales = dyadic_scales(*g, 1.0);
  CHECK(scales.size() >= 4);
  for (double s : {0.25, 0.5, 0.75}) {
    const Field u = sample(g, [s](std::span<const double> z) { return std::pow(z[1], s); });
    CHECK(holder_estimate(u, Region::whole(), scales).alpha_fit == doctest::Approx(s).epsilon(0.03 / s));
  }
  auto full = build_grid(1, {64, 128}, false, Symmetry::none);
  const SolutionId jump{SolutionKind::jump, 0.0};
  const Field j = sample(full, [&](std::span<const double> z) { return catalog(jump, {}, z); });
  CHECK(holder_estimate(j, Region::whole(), dyadic_scales(*full, 1.0)).alpha_fit <= 0.05);
}

TEST_CASE("affine field seminorm is the gradient magnitude") {
  auto g = build_grid(1, {128, 128}, false, Symmetry::none);
  const Field u = sample(g, [](std::span<const double> z) { return 3 * z[0] + 4 * z[1]; });
  const auto scales = dyadic_scales(*g, 1.0);
  CHECK(holder_seminorm(u, Region::whole(), scales, 1.0) == doctest::Approx(5.0).epsilon(0.02));
}

TEST_CASE("Holder estimate invariances") {
  auto g = build_grid(1, {64, 128}, true, Symmetry::even);
  const auto scales = dyadic_scales(*g, 1.0);
  const Field u = sample(g, [](std::span<const double> z) { return std::sqrt(z[1]) + 0.3 * z[0]; });
  const auto base = holder_estimate(u, Region::whole(), scales);
  Field shifted = u, scaled = u;
  for (auto& v : shifted.values) v += 7.0;
  for (auto& v : scaled.values) v *= 2.5;
  const auto s1 = holder_estimate(shifted, Region::whole(), scales);
  const auto s2 = holder_estimate(scaled, Region::whole(), scales);
  CHECK(s1.alpha_fit == doctest::Approx(base.alpha_fit));
  CHECK(s1.seminorm == doctest::Approx(base.seminorm));
  CHECK(s2.alpha_fit == doctest::Approx(base.alpha_fit));
  CHECK(s2.seminorm == doctest::Approx(2.5 * base.seminorm));
}

TEST_CASE("constant field is a degenerate fit") {
  auto g = build_grid(1, {64, 64}, true, Symmetry::even);
  const auto rep = holder_estimate(Field(g, 2.0), Region::whole(), dyadic_scales(*g, 1.0));
  CHECK(rep.degenerate);
  CHECK(rep.seminorm == 0.0);
  CHECK_THROWS_AS(holder_estimate(Field(g, 1.0), Region::whole(), std::vector<double>{0.1, 0.2}), Error);
}

TEST_CASE("C^{1,alpha} estimates") {
  auto g = build_grid(1, {128, 256}, true, Symmetry::even);
  const auto scales = dyadic_scales(*g, 1.0);
  const Field y2 = sample(g, [](std::span<const double> z) { return z[1] * z[1]; });
  const auto r2 = c1alpha_estimate(y2, Region::whole(), scales);
  CHECK(r2.c1);
  CHECK(r2.alpha_fit == doctest::Approx(2.0).epsilon(0.02));
  const Field special = sample(g, [](std::span<const double> z) { return std::pow(z[1], 1.5) / 1.5; });
  CHECK(c1alpha_estimate(special, Region::whole(), scales).alpha_fit - 1.0 == doctest::Approx(0.5).epsilon(0.1));
  auto odd = build_grid(1, {128, 256}, true, Symmetry::odd);
  const SolutionId os{SolutionKind::odd_singular, 0.0};
  const Field s = sample(odd, [&](std::span<const double> z) { return catalog(os, {0.5, 0.0, false}, z); });
  const auto rs = c1alpha_estimate(s, Region::whole(), dyadic_scales(*odd, 1.0));
  CHECK_FALSE(rs.c1);
  CHECK(rs.alpha_fit < 1.0);
}

TEST_CASE("Moser ratio") {
  auto g = build_grid(1, {32, 32}, true, Symmetry::even);
  const WeightParams w{0.5, 0.0, false};
  const double expected = 1.0 / weighted_lp(Field(g, 1.0), 2.0, w, Region::ball(1.0));
  CHECK(moser_ratio(Field(g, 1.0), Field(g, 0.0), w, 4.0, 2.0, 0.5) == doctest::Approx(expected));
  CHECK_THROWS_AS(moser_ratio(Field(g, 1.0), Field(g, 0.0), w, 1.0, 2.0, 0.5), Error);
}

TEST_CASE("critical exponents") {
  const auto e = exponents(0.0, 2, 0.0);
  CHECK(e.n_star == 3.0);
  CHECK(e.two_star == 6.0);
  CHECK(e.p_star == 4.0);
  const auto f = exponents(1.0, 2, 0.0);
  CHECK(f.n_star == 4.0);
  CHECK(f.two_star == 4.0);
  const auto n = exponents(-0.5, 2, 1.0);
  CHECK(n.n_star == 3.0);
  CHECK(n.two_star == 6.0);
  CHECK_THROWS_AS(exponents(0.0, 1, 1.0), Error);
  SplitMix64 rng(99);
  for (int k = 0; k < 50; ++k) {
    const double a = rng.uniform(-2.0, 2.0), t = rng.uniform(0.1, 2.0);
    const int nn = 2 + static_cast<int>(rng.below(3));
    const double ap = std::max(a, 0.0);
    const auto x = exponents(a, nn, t);
    CHECK(x.two_star == doctest::Approx(2 * x.n_star / (x.n_star - 2)));
    CHECK(x.p_star == doctest::Approx(2.0 * nn / (nn - 1 + t)));
    CHECK(x.n_star == doctest::Approx(nn + 1 + ap));
  }
}
