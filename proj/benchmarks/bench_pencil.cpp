#include <benchmark/benchmark.h>

#include "cksvar/pencil.hpp"
#include "cksvar/rng.hpp"

namespace {

using namespace cksvar;

Mat random_spd(int dim, Rng& rng) {
  Mat m(dim, dim);
  for (double& v : m.data) v = rng.next_normal();
  Mat spd = transpose(m) * m;
  for (int i = 0; i < dim; ++i) spd(i, i) += dim;
  return spd;
}

void BM_gen_eig_pencil(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(1);
  const Mat a = random_spd(dim, rng);
  const Mat b = random_spd(dim, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_eig_pencil(a, b));
  }
}
BENCHMARK(BM_gen_eig_pencil)->Arg(3)->Arg(6)->Arg(12);

void BM_sym_eig(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(2);
  const Mat m = random_spd(dim, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sym_eig(m));
  }
}
BENCHMARK(BM_sym_eig)->Arg(3)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
