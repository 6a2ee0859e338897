#include <benchmark/benchmark.h>

#include "cabsim/engines.hpp"

using namespace cabsim;

static void BM_Ucb1Step(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    Ucb1Engine engine(k, 0.1);
    Rng rng(1);
    for (auto _ : state) {
        const auto arm = engine.select_arm(rng);
        engine.update(arm, rng.next_double());
        benchmark::DoNotOptimize(arm);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Ucb1Step)->Range(16, 4096);

static void BM_Exp3Step(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    Exp3Engine engine(k, exp3_gamma(k, 1 << 16), 0.0, 1 << 16);
    Rng rng(2);
    for (auto _ : state) {
        const auto arm = engine.select_arm(rng);
        engine.update(arm, rng.next_double());
        benchmark::DoNotOptimize(arm);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Exp3Step)->Range(16, 4096);

static void BM_Exp3SStep(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    Exp3Engine engine(k, exp3_gamma(k, 1 << 16), 1.0 / (1 << 16), 1 << 16);
    Rng rng(3);
    for (auto _ : state) {
        const auto arm = engine.select_arm(rng);
        engine.update(arm, rng.next_double());
        benchmark::DoNotOptimize(arm);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Exp3SStep)->Range(16, 4096);

BENCHMARK_MAIN();
