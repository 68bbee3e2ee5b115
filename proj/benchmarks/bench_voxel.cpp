#include <benchmark/benchmark.h>

#include "corrtrans/rng.hpp"
#include "corrtrans/voxel/generate.hpp"
#include "corrtrans/voxel/tracking.hpp"

using namespace corrtrans;
using namespace corrtrans::voxel;

static void BM_Generate(benchmark::State& state) {
  VolumeSpec s;
  const auto n = static_cast<std::size_t>(state.range(0));
  s.dims = {n, n, n};
  for (auto _ : state) benchmark::DoNotOptimize(gen_correlated_volume(s).size());
}
BENCHMARK(BM_Generate)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RegularTracking(benchmark::State& state) {
  VolumeSpec s;
  s.dims = {64, 64, 64};
  const auto v = gen_correlated_volume(s);
  Rng r = Rng::stream(1, 0);
  for (auto _ : state) {
    const Ray3 ray{{-0.5, r.uniform(), r.uniform()}, {1.0, r.uniform() - 0.5, r.uniform() - 0.5}};
    benchmark::DoNotOptimize(regular_tracking(v, ray));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RegularTracking);

static void BM_Beam(benchmark::State& state) {
  VolumeSpec s;
  s.dims = {64, 64, 64};
  const auto v = gen_correlated_volume(s);
  for (auto _ : state) benchmark::DoNotOptimize(beam_transmittance(v, 0, 64, 0, 1));
}
BENCHMARK(BM_Beam)->Unit(benchmark::kMillisecond);
