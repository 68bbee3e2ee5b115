#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "corrtrans/render/integrator.hpp"
#include "corrtrans/render/scene_parser.hpp"

using namespace corrtrans::render;

namespace {

Scene cube() {
  std::ifstream in(std::string(CORRTRANS_SCENE_DIR) + "/cube_backlight.scene");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

}  // namespace

static void BM_RenderCrop(benchmark::State& state, bool classic) {
  const Scene s = cube();
  RenderOptions o;
  o.spp = 4;
  o.workers = 1;
  o.crop = CropWindow{48, 48, 32, 32};
  const CorrelatedTransport corr;
  const ClassicTransport cls;
  for (auto _ : state) {
    TraceStats st;
    benchmark::DoNotOptimize(render(s, classic ? static_cast<const TransportPolicy&>(cls) : corr, o, &st));
    state.counters["paths"] = static_cast<double>(st.paths);
  }
  state.SetItemsProcessed(state.iterations() * 32 * 32 * 4);
}
BENCHMARK_CAPTURE(BM_RenderCrop, correlated, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RenderCrop, classic, true)->Unit(benchmark::kMillisecond);
