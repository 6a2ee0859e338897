#include <doctest.h>

#include <cmath>
#include <vector>

#include "cabsim/engines.hpp"
#include "cabsim/environments.hpp"
#include "cabsim/errors.hpp"

using namespace cabsim;

namespace {

double norm2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::vector<double> random_cube_point(int k, Rng& rng) {
    std::vector<double> u(static_cast<std::size_t>(k));
    for (auto& x : u) x = rng.next_double();
    return u;
}

}  // namespace

TEST_CASE("cone peaks at its center with value 1") {
    const auto g = HolderFunction::cone(2, 1.0, {0.3, 0.7});
    CHECK(g(std::vector<double>{0.3, 0.7}) == doctest::Approx(1.0));
    CHECK(g(std::vector<double>{0.3, 0.2}) == doctest::Approx(0.5));
}

TEST_CASE("built-in functions satisfy their Hölder modulus") {
    Rng rng(42);
    const auto check = [&](const HolderFunction& g, int pairs) {
        for (int i = 0; i < pairs; ++i) {
            const auto u = random_cube_point(g.arity(), rng);
            const auto v = random_cube_point(g.arity(), rng);
            const double lhs = std::fabs(g(u) - g(v));
            const double rhs = g.lipschitz() * std::pow(norm2(u, v), g.exponent());
            CHECK(lhs <= rhs + 1e-12);
        }
    };
    check(HolderFunction::cone(1, 1.0, {0.35}), 10000);
    check(HolderFunction::cone(2, 0.5, {0.2, 0.9}), 10000);
    check(HolderFunction::multi_peak(1, 1.0, {{0.2}, {0.8}}, {0.8, 0.9}), 10000);
    check(HolderFunction::table({0.1, 0.9, 0.4, 0.6, 0.2}), 10000);
}

TEST_CASE("grid oracle agrees with closed-form optima") {
    const auto cone1 = HolderFunction::cone(1, 1.0, {0.37});
    auto res = grid_search_max([&](std::span<const double> u) { return cone1(u); }, 1);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.argmax[0] == doctest::Approx(0.37).epsilon(1e-4));

    const auto cone2 = HolderFunction::cone(2, 0.7, {0.81, 0.13});
    res = grid_search_max([&](std::span<const double> u) { return cone2(u); }, 2);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));

    const auto two = HolderFunction::multi_peak(1, 1.0, {{0.2}, {0.8}}, {0.8, 0.9});
    res = grid_search_max([&](std::span<const double> u) { return two(u); }, 1);
    CHECK(res.value == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(res.argmax[0] == doctest::Approx(0.8).epsilon(1e-3));

    const auto cone3 = HolderFunction::cone(3, 1.0, {0.5, 0.25, 0.75});
    res = grid_search_max([&](std::span<const double> u) { return cone3(u); }, 3);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(grid_search_max([](std::span<const double>) { return 0.0; }, 4),
                    OracleUnsupported);
}

TEST_CASE("noiseless stochastic samples equal the mean") {
    const StochasticEnv env(5, HolderFunction::cone(2, 1.0, {0.4, 0.6}), 0.0, {1, 3}, 7);
    const std::vector<double> point{0.9, 0.4, 0.9, 0.6, 0.9};
    CHECK(env.eval_mean(1, point) == doctest::Approx(1.0));
    for (std::uint64_t t = 1; t <= 5; ++t) {
        CHECK(env.sample_reward(t, point) == env.eval_mean(t, point));
    }
    CHECK(env.optimal_value(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("stochastic noise is centred with scale zeta") {
    const double zeta = 0.1;
    const StochasticEnv env(3, HolderFunction::cone(1, 1.0, {0.5}), zeta, {0}, 21);
    const std::vector<double> point{0.5, 0.5, 0.5};
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    double mgf_pos = 0.0, mgf_neg = 0.0;
    for (std::uint64_t t = 1; t <= n; ++t) {
        const double noise = env.sample_reward(t, point) - 1.0;
        sum += noise;
        sum_sq += noise * noise;
        mgf_pos += std::exp(noise);
        mgf_neg += std::exp(-noise);
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(std::sqrt(sum_sq / n) == doctest::Approx(zeta).epsilon(0.02));
    // Assumption-2 style moment bound at s = +-1 (Gaussian meets it with equality)
    const double bound = std::exp(zeta * zeta / 2.0);
    CHECK(mgf_pos / n <= bound * 1.01);
    CHECK(mgf_neg / n <= bound * 1.01);
}

TEST_CASE("random-coordinate mode averages the mean over coordinates") {
    const auto env = StochasticEnv::random_coordinate(
        4, HolderFunction::cone(1, 1.0, {0.5}), 0.0, {}, 3);
    const std::vector<double> point{0.5, 0.0, 0.5, 1.0};
    // g values: 1, 0.5, 1, 0.5 -> mean 0.75
    CHECK(env.eval_mean(1, point) == doctest::Approx(0.75));
    CHECK(env.optimal_value(1) == doctest::Approx(1.0).epsilon(1e-6));

    // realized rewards are one of the per-coordinate values
    double sum = 0.0;
    const int n = 20000;
    for (std::uint64_t t = 1; t <= n; ++t) sum += env.sample_reward(t, point);
    CHECK(sum / n == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("shard sequences have exactly the requested hardness") {
    SUBCASE("S = 1 is constant") {
        const auto seq = make_shard_sequence(10, 2, 1, 50, 5);
        CHECK(seq.size() == 50);
        CHECK(hardness(seq) == 1);
    }
    SUBCASE("S = 4 over 100 rounds") {
        const auto seq = make_shard_sequence(10, 2, 4, 100, 6);
        CHECK(hardness(seq) == 4);
        for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
            if (seq[t] != seq[t + 1]) CHECK(seq[t] != seq[t + 1]);
        }
    }
    SUBCASE("deterministic in the seed") {
        CHECK(make_shard_sequence(8, 1, 5, 64, 9) == make_shard_sequence(8, 1, 5, 64, 9));
    }
    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(make_shard_sequence(8, 1, 0, 64, 9), std::invalid_argument);
        CHECK_THROWS_AS(make_shard_sequence(8, 1, 65, 64, 9), std::invalid_argument);
    }
}

TEST_CASE("fixed adversarial environment replays identically") {
    const auto env = AdversarialEnv::fixed(4, HolderFunction::cone(1, 1.0, {0.6}), {2}, 100, 11);
    const std::vector<double> point{0.1, 0.1, 0.8, 0.1};
    const double first = env.sample_reward(3, point);
    CHECK(first == doctest::Approx(1.0 - 0.2));
    CHECK(env.sample_reward(3, point) == first);  // oblivious replay
    CHECK(env.eval_mean(3, point) == first);      // deterministic rewards
    CHECK(env.optimal_value(1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(env.sample_reward(101, point), HorizonExceeded);
}

TEST_CASE("shard-switching environment follows its tuple sequence") {
    const auto env =
        AdversarialEnv::shard_switching(6, HolderFunction::cone(1, 1.0, {0.5}), 3, 200, 13);
    CHECK(env.model() == EnvModel::ShardSwitching);
    CHECK(env.declared_hardness() == 3);
    std::vector<std::vector<int>> seq;
    for (std::uint64_t t = 1; t <= 200; ++t) {
        const auto tuple = env.tuple_at(t);
        seq.emplace_back(tuple.begin(), tuple.end());
    }
    CHECK(hardness(seq) == 3);

    // reward reads the active coordinate of the round
    std::vector<double> point{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    for (std::uint64_t t : {std::uint64_t{1}, std::uint64_t{77}, std::uint64_t{200}}) {
        const int active = env.tuple_at(t)[0];
        const double expected = 1.0 - std::fabs(point[static_cast<std::size_t>(active)] - 0.5);
        CHECK(env.sample_reward(t, point) == doctest::Approx(expected));
    }
}

TEST_CASE("drifting-peak adversary moves slowly and stays optimal at 1") {
    const auto env = AdversarialEnv::drifting_peak(5, 2, 1.0, {0, 3}, 0.2, 512, 4096, 17);
    CHECK(env.optimal_value(1) == 1.0);
    const std::vector<double> point{0.5, 0.5, 0.5, 0.5, 0.5};
    double prev = env.sample_reward(1, point);
    for (std::uint64_t t = 2; t <= 512; ++t) {
        const double cur = env.sample_reward(t, point);
        CHECK(cur >= 0.0);
        CHECK(cur <= 1.0);
        // bounded drift: peak motion per round is O(amplitude / period)
        CHECK(std::fabs(cur - prev) < 0.2 * 6.2832 / 512 * 2.0 + 1e-9);
        prev = cur;
    }
}

TEST_CASE("ADV lower-bound environment") {
    const AdvLowerBoundEnv env(8, 97);

    SUBCASE("bumps") {
        CHECK(AdvLowerBoundEnv::bump_low(0.25) == doctest::Approx(1.0));
        CHECK(AdvLowerBoundEnv::bump_low(0.0) == doctest::Approx(0.0));
        CHECK(AdvLowerBoundEnv::bump_low(0.5) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(AdvLowerBoundEnv::bump_low(0.75) == 0.0);  // outside support
        CHECK(AdvLowerBoundEnv::bump_high(0.75) == doctest::Approx(1.0));
        CHECK(AdvLowerBoundEnv::bump_high(0.5) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(AdvLowerBoundEnv::bump_high(1.0) == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("hidden blocks are a non-trivial ordered 2-partition") {
        CHECK_FALSE(env.block_one().empty());
        CHECK_FALSE(env.block_two().empty());
        CHECK(env.block_one().size() + env.block_two().size() == 8);
    }

    SUBCASE("diagonal plays cap at expected reward 1/2") {
        const std::vector<double> quarter(8, 0.25);
        CHECK(env.eval_mean(1, quarter) == doctest::Approx(0.5));
        const std::vector<double> three_quarter(8, 0.75);
        CHECK(env.eval_mean(1, three_quarter) == doctest::Approx(0.5));
        for (int i = 0; i <= 1000; ++i) {
            const std::vector<double> diag(8, i / 1000.0);
            CHECK(env.eval_mean(1, diag) <= 0.5 + 1e-12);
        }
    }

    SUBCASE("the mixed point attains the optimum exactly") {
        const auto star = env.optimal_point();
        CHECK(env.eval_mean(1, star) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::uint64_t t = 1; t <= 200; ++t) {
            CHECK(env.sample_reward(t, star) == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(env.optimal_value(1) == 1.0);
    }

    SUBCASE("rewards replay as a pure function of (seed, t, point)") {
        const AdvLowerBoundEnv twin(8, 97);
        std::vector<double> point{0.1, 0.9, 0.3, 0.6, 0.25, 0.75, 0.5, 0.0};
        for (std::uint64_t t = 1; t <= 50; ++t) {
            CHECK(env.sample_reward(t, point) == twin.sample_reward(t, point));
        }
    }
}

TEST_CASE("environment spec JSON round trip") {
    EnvSpec spec;
    spec.model = "shard_switching";
    spec.d = 10;
    spec.k = 1;
    spec.alpha = 1.0;
    spec.zeta = 0.0;
    spec.shard_s = 4;
    spec.function.kind = "cone";
    spec.function.peaks = {{0.71}};
    spec.seed = 5;
    const auto text = env_spec_to_json(spec);
    const auto back = env_spec_from_json(text);
    CHECK(back.model == spec.model);
    CHECK(back.d == spec.d);
    CHECK(back.shard_s == spec.shard_s);
    CHECK(back.function.peaks == spec.function.peaks);
    CHECK(back.seed == spec.seed);

    const auto env = build_environment(back, 123, 256);
    CHECK(env->model() == EnvModel::ShardSwitching);
    CHECK(env->dim() == 10);
}

TEST_CASE("build_environment validates its inputs") {
    EnvSpec spec;
    spec.model = "adversarial";
    CHECK_THROWS_AS(build_environment(spec, 1, std::nullopt), std::invalid_argument);
    spec.model = "nonsense";
    CHECK_THROWS_AS(build_environment(spec, 1, 100), std::invalid_argument);
}
