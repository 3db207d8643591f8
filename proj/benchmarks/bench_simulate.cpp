#include <benchmark/benchmark.h>

#include "cksvar/montecarlo.hpp"
#include "cksvar/ranktest.hpp"
#include "cksvar/simulate.hpp"

namespace {

using namespace cksvar;

void BM_simulate_path(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CksvarParams params = mc_design(McDesign::nonlinear).params;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(simulate_path(params, n, {}, rng));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_simulate_path)->Arg(200)->Arg(1500);

void BM_lambda_stat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CksvarParams params = mc_design(McDesign::nonlinear).params;
  // retained sample: the split statistic needs both regimes visited
  const RetainedDraw draw =
      draw_retained_path(params, 7, McDesign::nonlinear, n, 0, 0.15, 10000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda_stat(draw.path, 2, Variant::mb));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_lambda_stat)->Arg(200)->Arg(1500);

}  // namespace
