#include <benchmark/benchmark.h>

#include "cabsim/cab.hpp"

using namespace cabsim;

static void BM_RunCabDiagonal(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    CabConfig config;
    config.d = 10;
    config.k = 1;
    config.engine = EngineKind::ucb1(0.1);
    config.family = build_random_family(10, 1, 1, 0);
    const StochasticEnv env(10, HolderFunction::cone(1, 1.0, {0.71}), 0.1, {3}, 5);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_cab(config, env, n, seed++));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_RunCabDiagonal)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

static void BM_RunCabGeneralK2(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    CabConfig config;
    config.d = 20;
    config.k = 2;
    config.engine = EngineKind::exp3();
    config.family = build_random_family(20, 2, std::nullopt, 1);
    const auto env =
        AdversarialEnv::fixed(20, HolderFunction::cone(2, 1.0, {0.3, 0.8}), {4, 11}, n, 9);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_cab(config, env, n, seed++));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_RunCabGeneralK2)->Arg(1 << 10)->Arg(1 << 14);

BENCHMARK_MAIN();
