#include <benchmark/benchmark.h>

#include "cksvar/limitdist.hpp"

namespace {

using namespace cksvar;

void BM_mb_limit_draw(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    Rng rng(derive_seed(3, ++i));
    try {
      benchmark::DoNotOptimize(mb_limit_draw(1, grid, 0.0, rng));
    } catch (const std::exception&) {
      // singular draws are part of the workload
    }
  }
  state.SetItemsProcessed(state.iterations() * grid);
}
BENCHMARK(BM_mb_limit_draw)->Arg(500)->Arg(2000);

void BM_sb_limit_draw(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    Rng rng(derive_seed(4, ++i));
    benchmark::DoNotOptimize(sb_limit_draw(2, grid, rng));
  }
  state.SetItemsProcessed(state.iterations() * grid);
}
BENCHMARK(BM_sb_limit_draw)->Arg(500)->Arg(2000);

}  // namespace
