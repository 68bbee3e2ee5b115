#include <benchmark/benchmark.h>

#include "corrtrans/free_flight.hpp"

using namespace corrtrans;

static void BM_Sampler(benchmark::State& state, ExtinctionModel model) {
  const FlightSampler s(model);
  Rng rng = Rng::stream(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.sample(rng, 2.0));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_Sampler, exponential, ExtinctionModel(ExponentialModel{1.5}));
BENCHMARK_CAPTURE(BM_Sampler, gamma_proportional, ExtinctionModel::gamma_concentration(2, 1, 1));
BENCHMARK_CAPTURE(BM_Sampler, gamma_general, ExtinctionModel::gamma_concentration(1, 2, 1));
BENCHMARK_CAPTURE(BM_Sampler, linear, ExtinctionModel(LinearNegativeModel{1.5}));
BENCHMARK_CAPTURE(BM_Sampler, gamma_pathlength, ExtinctionModel(GammaPathLengthModel{1.0, 0.5}));
