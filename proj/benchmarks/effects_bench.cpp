#include <benchmark/benchmark.h>

#include <vector>

#include "bench_util.hpp"
#include "scriptfocus/effects.hpp"

namespace scriptfocus {
namespace {

constexpr int kW = 3840;
constexpr int kH = 1920;

struct Scene {
  Image frame = bench::noise_image(kW, kH, 1);
  AttenuationField field = attenuation_field(bench::seam_object(kW, kH), 24, 120);
  AttenuationField other = attenuation_field(shift_mask(bench::seam_object(kW, kH), kW / 3, 0), 24, 120);
};

const Scene& scene() {
  static const Scene s;
  return s;
}

void BM_Vignette(benchmark::State& state) {
  const Scene& s = scene();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(apply_vignette(s.frame, s.field, 0.8, 0.15, 1.0, workers));
  state.SetItemsProcessed(state.iterations() * kW * kH);
}
BENCHMARK(BM_Vignette)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Desaturate(benchmark::State& state) {
  const Scene& s = scene();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(apply_desaturate(s.frame, s.field, 0.8, 1.0, workers));
  state.SetItemsProcessed(state.iterations() * kW * kH);
}
BENCHMARK(BM_Desaturate)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_CombineTwoVignettes(benchmark::State& state) {
  const Scene& s = scene();
  const std::vector<EffectLayer> layers = {{std::cref(s.field), 0.8, 0.15, 1.0, EffectKind::kVignette},
                                           {std::cref(s.other), 0.6, 0.15, 0.7, EffectKind::kVignette}};
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(combine_cues(s.frame, layers, workers));
  state.SetItemsProcessed(state.iterations() * kW * kH);
}
BENCHMARK(BM_CombineTwoVignettes)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace scriptfocus
