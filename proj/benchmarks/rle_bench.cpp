#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "scriptfocus/rle.hpp"

namespace scriptfocus {
namespace {

void BM_RleEncode(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const BinaryMask mask = bench::seam_object(w, w / 2);
  for (auto _ : state) benchmark::DoNotOptimize(rle_encode(mask));
  state.SetItemsProcessed(state.iterations() * mask.width * mask.height);
}
BENCHMARK(BM_RleEncode)->Arg(1920)->Arg(3840)->Unit(benchmark::kMicrosecond);

void BM_RleDecode(benchmark::State& state) {
  const int w = static_cast<int>(state.range(0));
  const MaskRLE rle = rle_encode(bench::seam_object(w, w / 2));
  for (auto _ : state) benchmark::DoNotOptimize(rle_decode(rle));
  state.SetItemsProcessed(state.iterations() * rle.width * rle.height);
}
BENCHMARK(BM_RleDecode)->Arg(1920)->Arg(3840)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace scriptfocus
