#include <benchmark/benchmark.h>

#include <random>

#include "meyer/sumsets.hpp"

using namespace meyer;

namespace {

FiniteSet random_plane_set(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<long> val(-5000, 5000);
  std::vector<RatVec> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({Rational(val(rng), 7), Rational(val(rng))});
  return FiniteSet(2, pts);
}

void BM_Sum(benchmark::State& state, SumBackend backend) {
  const FiniteSet a = random_plane_set(state.range(0), 1), b = random_plane_set(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(sum(a, b, backend));
  state.SetComplexityN(state.range(0));
}

void BM_Iterated(benchmark::State& state) {
  std::vector<long> xs;
  for (long i = 0; i < state.range(0); ++i) xs.push_back(i * i % 101);
  const FiniteSet a = FiniteSet::of_integers(xs);
  for (auto _ : state) benchmark::DoNotOptimize(iterated(a, 3, 2));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Sum, sorted_merge, SumBackend::SortedMerge)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK_CAPTURE(BM_Sum, hashing, SumBackend::Hashing)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_Iterated)->Arg(10)->Arg(40);
