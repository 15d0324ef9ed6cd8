#include "sqflab/counting.hpp"
#include "sqflab/density.hpp"

#include <benchmark/benchmark.h>

using namespace sqflab;

static void BM_CountSquarefreeValues(benchmark::State& state) {
    IntPoly f{1, 0, 1};
    uint64_t x = static_cast<uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_squarefree_values(f, x));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(x));
}
BENCHMARK(BM_CountSquarefreeValues)->Arg(1000)->Arg(10000)->Arg(100000)
    ->Unit(benchmark::kMillisecond);

static void BM_SumKD(benchmark::State& state) {
    IntPoly f{1, 0, 1};
    uint64_t D = static_cast<uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sum_kD_values(f, 1000000, D));
}
BENCHMARK(BM_SumKD)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_CertifiedDensity(benchmark::State& state) {
    IntPoly f{1, 0, 1};
    uint64_t cutoff = static_cast<uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(c_f_certified(f, cutoff).midpoint());
}
BENCHMARK(BM_CertifiedDensity)->Arg(10000)->Arg(100000)->Arg(1000000)
    ->Unit(benchmark::kMillisecond);

static void BM_ResidualWindow(benchmark::State& state) {
    APWindow w(10000000, 11000000, 7, 3);
    for (auto _ : state) benchmark::DoNotOptimize(residual_ap(w, 1000));
}
BENCHMARK(BM_ResidualWindow)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
