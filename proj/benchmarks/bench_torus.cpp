#include <benchmark/benchmark.h>

#include <random>

#include "meyer/toruscover.hpp"

using namespace meyer;

namespace {

GridSet random_grid(std::size_t dim, std::size_t n, double p, unsigned seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution coin(p);
  GridSet g(dim, n);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= n;
  for (std::size_t i = 0; i < total; ++i)
    if (coin(rng)) g.set_flat(i);
  return g;
}

}  // namespace

static void BM_TorusSum(benchmark::State& state) {
  const std::size_t dim = state.range(0), n = state.range(1);
  const GridSet a = random_grid(dim, n, 0.05, 1), b = random_grid(dim, n, 0.05, 2);
  for (auto _ : state) benchmark::DoNotOptimize(torus_sum(a, b));
}
BENCHMARK(BM_TorusSum)->Args({1, 1024})->Args({2, 128})->Args({2, 256});

static void BM_CoverUnitCube(benchmark::State& state) {
  const GridSet a = random_grid(state.range(0), 1024, 0.3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cover_unit_cube(a, Rational(1, 4)));
}
BENCHMARK(BM_CoverUnitCube)->Arg(1)->Arg(2);
