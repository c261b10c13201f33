#include "utorsion/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace utorsion;

namespace {

const Rat kRes(1, 1000000000);

void BM_NormInterval(benchmark::State& state) {
  Scenario s = builtin_scenario("NoWC");
  long long k = 0;
  for (auto _ : state) {
    NormInterval nv = s.digits->circle_norm(k % 2000, kRes, 512);
    benchmark::DoNotOptimize(nv.lo);
    ++k;
  }
}
BENCHMARK(BM_NormInterval);

void BM_NormExact(benchmark::State& state) {
  Scenario s = builtin_scenario("prufer");
  long long k = 0;
  for (auto _ : state) {
    NormInterval nv = s.digits->circle_norm(k % 2000, kRes, 512);
    benchmark::DoNotOptimize(nv.lo);
    ++k;
  }
}
BENCHMARK(BM_NormExact);

void BM_CountClosedForm(benchmark::State& state) {
  SymbolicSet x = SymbolicSet::interval_union(IndexRule::quadratic(4, 0, 0),
                                              IndexRule::quadratic(4, 4, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(x.count_leq(state.range(0)));
  }
}
BENCHMARK(BM_CountClosedForm)->Arg(10000)->Arg(1000000);

void BM_CountEnumerated(benchmark::State& state) {
  SymbolicSet x = SymbolicSet::interval_union(IndexRule::quadratic(4, 0, 0),
                                              IndexRule::quadratic(4, 4, 1));
  for (auto _ : state) {
    Int c = 0;
    for (long long i = 0; i <= state.range(0); ++i) c += x.member(i) ? 1 : 0;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_CountEnumerated)->Arg(10000);

void BM_WaveMembership(benchmark::State& state) {
  auto ideal = IdealSpec::wave(Rat(3, 5));
  SymbolicSet z = ideal->wave_structure()->Z;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ideal->membership(z).value);
  }
}
BENCHMARK(BM_WaveMembership);

void BM_GreedyExtraction(benchmark::State& state) {
  auto seq = RatioSequence::affine();
  for (auto _ : state) {
    auto d = DigitStream::from_rational(seq, Rat(355, 1130));
    Int c = 0;
    for (long long n = 1; n <= state.range(0); ++n) c += d->digit_at(n);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_GreedyExtraction)->Arg(64)->Arg(256);

void BM_Decide(benchmark::State& state) {
  Scenario s = builtin_scenario("Exa2osserv");
  for (auto _ : state) {
    TorsionContext ctx = s.context();
    benchmark::DoNotOptimize(decide(ctx).value);
  }
}
BENCHMARK(BM_Decide);

}  // namespace

BENCHMARK_MAIN();
