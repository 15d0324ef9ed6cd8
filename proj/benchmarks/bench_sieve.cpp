#include "sqflab/arith.hpp"

#include <benchmark/benchmark.h>

using namespace sqflab;

static void BM_SquarefreeSieve(benchmark::State& state) {
    uint64_t n = static_cast<uint64_t>(state.range(0));
    int threads = static_cast<int>(state.range(1));
    for (auto _ : state) {
        SieveTable t = squarefree_sieve_interval(1, n, uint64_t{1} << 20, threads);
        benchmark::DoNotOptimize(t.squarefree_count());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}
BENCHMARK(BM_SquarefreeSieve)
    ->Args({10000000, 1})
    ->Args({10000000, 2})
    ->Args({100000000, 1})
    ->Args({100000000, 2})
    ->Args({100000000, 4})
    ->Unit(benchmark::kMillisecond);

static void BM_SieveSegmentSize(benchmark::State& state) {
    uint64_t seg = uint64_t{1} << state.range(0);
    for (auto _ : state) {
        SieveTable t = squarefree_sieve_interval(1, 50000000, seg, 1);
        benchmark::DoNotOptimize(t.squarefree_count());
    }
}
BENCHMARK(BM_SieveSegmentSize)->Arg(16)->Arg(18)->Arg(20)->Arg(22)->Arg(24)
    ->Unit(benchmark::kMillisecond);

static void BM_MobiusSieve(benchmark::State& state) {
    uint64_t n = static_cast<uint64_t>(state.range(0));
    for (auto _ : state) {
        SieveTable t = mobius_sieve(n);
        benchmark::DoNotOptimize(t.mertens(n));
    }
}
BENCHMARK(BM_MobiusSieve)->Arg(100000)->Arg(1000000)->Arg(10000000)
    ->Unit(benchmark::kMillisecond);
