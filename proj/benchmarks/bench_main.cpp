#include <benchmark/benchmark.h>

#include <cmath>

#include "rholab/analysis.hpp"
#include "rholab/assembly.hpp"
#include "rholab/frequency.hpp"
#include "rholab/solver.hpp"

using namespace rholab;

namespace {

ProblemSpec poisson(double a, double eps, const GridPtr& g) {
  ProblemSpec s;
  s.weight = {a, eps, false};
  s.rhs = RhsKind::volumetric;
  s.f = Field(g, 1.0);
  return s;
}

void BM_Assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = build_grid(1, {2 * n, n}, true, Symmetry::even);
  const ProblemSpec s = poisson(0.5, 0.1, g);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(s, g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g->size()));
}
BENCHMARK(BM_Assemble)->RangeMultiplier(2)->Range(32, 256);

void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = build_grid(1, {2 * n, n}, true, Symmetry::even);
  const SparseSystem sys = assemble(poisson(0.5, 0.0, g), g);
  SolveStats stats;
  for (auto _ : state) benchmark::DoNotOptimize(solve(sys, {}, &stats));
  state.counters["iterations"] = stats.iterations;
}
BENCHMARK(BM_Solve)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_HolderEstimate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = build_grid(1, {n, n}, true, Symmetry::even);
  const Field u = sample(g, [](std::span<const double> z) { return std::sqrt(z[1]) + z[0] * z[0]; });
  const auto scales = dyadic_scales(*g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(holder_estimate(u, Region::whole(), scales));
}
BENCHMARK(BM_HolderEstimate)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);

void BM_FrequencyProfile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = build_grid(1, {2 * n, n}, true, Symmetry::odd);
  const WeightParams w{0.5, 0.0, false};
  const Field u = sample(g, [](std::span<const double> z) { return std::sqrt(z[1]) * (1 + z[0]); });
  const auto radii = log_radii(8 * g->h(0), 0.8, 12);
  for (auto _ : state) benchmark::DoNotOptimize(compute_HE(u, w, radii));
}
BENCHMARK(BM_FrequencyProfile)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
