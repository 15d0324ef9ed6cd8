#include "sqflab/arith.hpp"
#include "sqflab/rng.hpp"

#include <benchmark/benchmark.h>

using namespace sqflab;

static void BM_FactorUniform(benchmark::State& state) {
    // values around 10^range(0)
    SeededRng rng(1);
    mpz_class base = 1;
    for (int i = 0; i < state.range(0); ++i) base *= 10;
    std::vector<mpz_class> inputs;
    for (int i = 0; i < 64; ++i)
        inputs.push_back(base + static_cast<unsigned long>(rng.below(1000000)) + 1);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(factor(inputs[i % inputs.size()]).factors.size());
        ++i;
    }
}
BENCHMARK(BM_FactorUniform)->Arg(9)->Arg(12)->Arg(15)->Arg(18);

static void BM_MuSquared(benchmark::State& state) {
    SeededRng rng(2);
    std::vector<mpz_class> inputs;
    for (int i = 0; i < 256; ++i)
        inputs.push_back(mpz_class(static_cast<unsigned long>(rng.below(1000000000) + 2)));
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mu_squared(inputs[i % inputs.size()]));
        ++i;
    }
}
BENCHMARK(BM_MuSquared);
