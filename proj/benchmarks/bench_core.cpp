#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "walshlab/counterexamples.hpp"
#include "walshlab/series.hpp"
#include "walshlab/variation.hpp"
#include "walshlab/walsh.hpp"

using namespace walshlab;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return v;
}

void BM_fwht(benchmark::State& state) {
  const std::size_t n = std::size_t{1} << state.range(0);
  std::vector<double> v = random_vector(n, 42);
  for (auto _ : state) {
    std::vector<double> work = v;
    fwht_inplace(work);
    benchmark::DoNotOptimize(work.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_fwht)->DenseRange(6, 16, 2);

void BM_dirichlet(benchmark::State& state) {
  const auto strategy = static_cast<DirichletStrategy>(state.range(0));
  const std::int64_t n = q_index(6);
  std::int64_t acc = 0;
  for (auto _ : state) {
    for (std::uint64_t p = 0; p < 256; ++p)
      acc += dirichlet(n, DyadicRational(p, 8), strategy);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_dirichlet)->Arg(0)->Arg(1)->Arg(2);

void BM_cesaro_kernel_cells(benchmark::State& state) {
  const int scale = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto cells = cesaro_kernel_cells(std::int64_t{1} << scale, -0.3, scale);
    benchmark::DoNotOptimize(cells.data());
  }
}
BENCHMARK(BM_cesaro_kernel_cells)->DenseRange(6, 10, 2);

void BM_variation_exact(benchmark::State& state) {
  const auto f = Function2D(GridFunction2D(2, random_vector(16, 7)));
  const auto w = WeightSequence::harmonic();
  for (auto _ : state) {
    auto r = sharp_var(f, 1, w, SolveMode::exact);
    benchmark::DoNotOptimize(r.upper);
  }
}
BENCHMARK(BM_variation_exact);

void BM_variation_heuristic(benchmark::State& state) {
  const auto f = Function2D(build_gN(static_cast<int>(state.range(0))));
  const auto w = WeightSequence::sqrt_log_family();
  for (auto _ : state) {
    auto r = sharp_var(f, 1, w, SolveMode::heuristic);
    benchmark::DoNotOptimize(r.upper);
  }
}
BENCHMARK(BM_variation_heuristic)->DenseRange(2, 5, 1);

void BM_probe_partial_sum(benchmark::State& state) {
  const auto w = WeightSequence::sqrt_log_family();
  for (auto _ : state) {
    auto r = probe_partial_sum(static_cast<int>(state.range(0)), w);
    benchmark::DoNotOptimize(r.growth_ratio);
  }
}
BENCHMARK(BM_probe_partial_sum)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
