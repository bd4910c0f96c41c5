#include <benchmark/benchmark.h>

#include <cstdint>

#include "stav/curves.hpp"
#include "stav/mod_arith.hpp"
#include "stav/param_sets.hpp"
#include "stav/poly_family.hpp"
#include "stav/sato_tate.hpp"
#include "stav/sums.hpp"

namespace {

stav::CurveFamily zfam() {
  return stav::CurveFamily::make(stav::IntPoly::from_ints({0, 1}),
                                 stav::IntPoly::from_ints({1}));
}

void BM_sieve(benchmark::State& state) {
  auto bound = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stav::sieve_primes(bound));
}
BENCHMARK(BM_sieve)->Arg(100000)->Arg(1000000);

void BM_trace_table(benchmark::State& state) {
  stav::CurveFamily fam = zfam();
  std::int64_t p = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(stav::build_trace_table(fam, p));
  state.SetComplexityN(p);
}
BENCHMARK(BM_trace_table)->Arg(101)->Arg(1009)->Arg(4001);

void BM_michel_additive(benchmark::State& state) {
  stav::CurveFamily fam = zfam();
  stav::PrimeData pd(fam, state.range(0));
  std::int64_t m = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stav::michel_sum_additive(pd, 5, m));
    m = (m + 1) % pd.ctx.p();
  }
}
BENCHMARK(BM_michel_additive)->Arg(997);

void BM_farey_enumeration(benchmark::State& state) {
  std::int64_t T = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(stav::farey_set(T));
}
BENCHMARK(BM_farey_enumeration)->Arg(100)->Arg(300);

void BM_congruence_count(benchmark::State& state) {
  std::int64_t T = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(stav::congruence_count(T, 997));
}
BENCHMARK(BM_congruence_count)->Arg(20)->Arg(50);

void BM_averaged_study(benchmark::State& state) {
  stav::CurveFamily fam = zfam();
  stav::PairSet set = stav::farey_set(10);
  for (auto _ : state) {
    stav::AveragedStudy study(fam, set, state.range(0), 8);
    benchmark::DoNotOptimize(study.sup_deviation());
  }
}
BENCHMARK(BM_averaged_study)->Arg(200)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
