#include <benchmark/benchmark.h>

#include "meyer/lift.hpp"

using namespace meyer;

static void BM_GenerateFibonacci(benchmark::State& state) {
  const Quad phi(Rational(1, 2), Rational(1, 2), 5);
  Scheme s;
  s.d = 1;
  s.e = 1;
  s.generators = {{Quad(1), Quad(1)}, {phi, Quad(-1) / phi}};
  s.window = {QuadBox{{Quad(-1)}, {phi - Quad(1)}}};
  for (auto _ : state) benchmark::DoNotOptimize(generate(s, Box::cube(1, state.range(0))));
}
BENCHMARK(BM_GenerateFibonacci)->Arg(50)->Arg(200);

static void BM_LiftIntegers(benchmark::State& state) {
  std::vector<RatVec> pts;
  for (long x = -100; x <= 100; ++x) pts.push_back({Rational(x)});
  const PointPatch a(1, pts, Box::cube(1, 100));
  for (auto _ : state) benchmark::DoNotOptimize(lift_at(a, state.range(0)));
}
BENCHMARK(BM_LiftIntegers)->Arg(20)->Arg(40);
