#include <benchmark/benchmark.h>

#include <cmath>

#include "corrtrans/lab/particle_grid.hpp"

using namespace corrtrans;
using namespace corrtrans::lab;

static void BM_FieldAndGrid(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const auto f = gen_positive_medium(static_cast<std::size_t>(state.range(0)), 1e-4, 0.95, seed++, 20);
    const ParticleGrid g(f);
    benchmark::DoNotOptimize(g.cells_per_axis());
  }
}
BENCHMARK(BM_FieldAndGrid)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_GridTrace(benchmark::State& state) {
  Rng field_rng = Rng::stream(2, 0);
  const auto f = gen_uncorrelated_medium(100000, 1e-4, field_rng);
  const ParticleGrid g(f);
  Rng r = Rng::stream(3, 0);
  for (auto _ : state) {
    const double a = 6.283185307179586 * r.uniform();
    benchmark::DoNotOptimize(g.trace({r.uniform(), r.uniform()}, {std::cos(a), std::sin(a)}, 5.0));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GridTrace);
