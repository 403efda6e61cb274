#include <benchmark/benchmark.h>

#include "meyer/freiman.hpp"

using namespace meyer;

static void BM_FindCoverInterval(benchmark::State& state) {
  std::vector<long> xs;
  for (long i = 0; i < state.range(0); ++i) xs.push_back(i);
  const FiniteSet a = FiniteSet::of_integers(xs);
  for (auto _ : state) benchmark::DoNotOptimize(find_cover(a));
}
BENCHMARK(BM_FindCoverInterval)->Arg(20)->Arg(80);

static void BM_FindCoverRankTwo(benchmark::State& state) {
  const Gap g({{Rational(1)}, {Rational(37)}}, {state.range(0), state.range(0)}, {Rational(0)}, true);
  const FiniteSet a = enumerate(g);
  CoverOptions opts;
  opts.max_f = 1;
  for (auto _ : state) benchmark::DoNotOptimize(find_cover(a, opts));
}
BENCHMARK(BM_FindCoverRankTwo)->Arg(3)->Arg(6);
