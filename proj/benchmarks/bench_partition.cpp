#include <benchmark/benchmark.h>

#include "cabsim/partition.hpp"

using namespace cabsim;

static void BM_BuildFamily(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_random_family(d, 2, std::nullopt, seed++));
    }
}
BENCHMARK(BM_BuildFamily)->Arg(10)->Arg(50)->Arg(200);

static void BM_ExhaustiveVerify(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto family = build_random_family(d, 2, std::nullopt, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            verify_partition_assumption(family, VerificationBudget::exhaustive()));
    }
    state.counters["tuples"] = static_cast<double>(binomial_clamped(d, 2, 1'000'000));
}
BENCHMARK(BM_ExhaustiveVerify)->Arg(10)->Arg(20)->Arg(40);

static void BM_Separates(benchmark::State& state) {
    Rng rng(5);
    const auto p = random_partition(100, 4, rng);
    const std::vector<int> tuple{3, 17, 42, 99};
    for (auto _ : state) {
        benchmark::DoNotOptimize(separates(p, tuple));
    }
}
BENCHMARK(BM_Separates);

BENCHMARK_MAIN();
