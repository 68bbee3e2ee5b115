#include <benchmark/benchmark.h>

#include "corrtrans/transmittance.hpp"

using namespace corrtrans;

static void BM_GammaClosedForm(benchmark::State& state) {
  const GammaConcentrationModel m{10, 40, 0.2};
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transmittance_gamma(t, m) + extinction_prob_gamma(t, m));
    t = t > 10 ? 0.0 : t + 1e-3;
  }
}
BENCHMARK(BM_GammaClosedForm);

static void BM_ModelDispatch(benchmark::State& state) {
  const ExtinctionModel m = ExtinctionModel::gamma_concentration(10, 40, 0.2);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.transmittance(t));
    t = t > 10 ? 0.0 : t + 1e-3;
  }
}
BENCHMARK(BM_ModelDispatch);

static void BM_MixtureMu(benchmark::State& state) {
  const MixtureEvaluator ev(MixtureModel{{{0.5, ExtinctionModel(ExponentialModel{1.0}), 0.5, {}},
                                          {0.5, ExtinctionModel::gamma_concentration(3, 6, 1), 1.0, {}}}});
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.diff_extinction(t));
    t = t > 10 ? 0.0 : t + 1e-3;
  }
}
BENCHMARK(BM_MixtureMu);
