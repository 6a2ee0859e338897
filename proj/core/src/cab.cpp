#include "cabsim/cab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cabsim/errors.hpp"

namespace cabsim {

namespace {

double guarded_log(std::uint64_t T) { return std::max(std::log(static_cast<double>(T)), 1.0); }

std::uint64_t ceil_at_least_one(double x) {
    if (!std::isfinite(x)) throw std::overflow_error("grid resolution overflow");
    const double c = std::ceil(x);
    return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

void check_t_alpha(std::uint64_t T, double alpha) {
    if (T < 1) throw std::invalid_argument("T must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
}

}  // namespace

std::uint64_t m_schedule_k1(std::uint64_t T, double alpha) {
    return m_schedule_k1_shard(T, alpha, 1);
}

std::uint64_t m_schedule_k1_shard(std::uint64_t T, double alpha, std::uint64_t s) {
    check_t_alpha(T, alpha);
    if (s < 1) throw std::invalid_argument("S must be >= 1");
    const double base = static_cast<double>(T) / (static_cast<double>(s) * guarded_log(T));
    return ceil_at_least_one(std::pow(base, 1.0 / (2.0 * alpha + 1.0)));
}

std::uint64_t m_schedule_general(std::uint64_t T, double alpha, int k, int d) {
    return m_schedule_general_shard(T, alpha, k, d, 1);
}

std::uint64_t m_schedule_general_shard(std::uint64_t T, double alpha, int k, int d,
                                       std::uint64_t s) {
    check_t_alpha(T, alpha);
    if (d < 2) throw std::invalid_argument("general schedule needs d >= 2 (ln d > 0)");
    if (k < 1 || k > d) throw std::invalid_argument("require 1 <= k <= d");
    if (s < 1) throw std::invalid_argument("S must be >= 1");
    const double kd = static_cast<double>(k);
    const double inner = std::pow(kd, (alpha - 3.0) / 2.0) * std::exp(-kd / 2.0) *
                         std::pow(static_cast<double>(s) * std::log(static_cast<double>(d)), -0.5) *
                         std::sqrt(static_cast<double>(T) / guarded_log(T));
    return ceil_at_least_one(std::pow(inner, 2.0 / (2.0 * alpha + kd)));
}

void CabConfig::validate() const {
    if (k < 1 || k > d) throw std::invalid_argument("require 1 <= k <= d");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
    if (hardness_budget && *hardness_budget < 1) {
        throw std::invalid_argument("hardness budget S must be >= 1");
    }
    if (family.partitions.empty()) throw std::invalid_argument("config needs a partition family");
    if (family.d != d || family.k != k) {
        throw std::invalid_argument("family (d,k) does not match config");
    }
    if (engine.type == EngineType::Ucb1 && !(engine.zeta > 0.0)) {
        throw std::invalid_argument("UCB1 requires zeta > 0");
    }
}

std::uint64_t schedule_m(const CabConfig& config, std::uint64_t T) {
    const std::uint64_t s = config.hardness_budget.value_or(1);
    if (config.k == 1) return m_schedule_k1_shard(T, config.alpha, s);
    return m_schedule_general_shard(T, config.alpha, config.k, config.d, s);
}

EpochPlan plan_epochs(const CabConfig& config, std::uint64_t n) {
    config.validate();
    if (n < 1) throw std::invalid_argument("need n >= 1 rounds");
    EpochPlan plan;
    for (std::uint64_t T = 1; T <= n; T *= 2) {
        const std::uint64_t M = schedule_m(config, T);
        if (M > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
            throw ArmCapExceeded(T, M, config.arm_cap + 1, config.arm_cap);
        }
        const StrategyGrid grid(config.family, static_cast<int>(M));
        if (grid.num_strategies() > config.arm_cap) {
            throw ArmCapExceeded(T, M, grid.num_strategies(), config.arm_cap);
        }
        Epoch epoch;
        epoch.start = T;
        epoch.length = std::min(2 * T - 1, n) - T + 1;
        epoch.resolution = M;
        epoch.num_arms = grid.num_strategies();
        plan.epochs.push_back(epoch);
    }
    return plan;
}

const Epoch& RegretTrace::epoch_at(std::uint64_t t) const {
    if (t < 1 || t > rounds) throw std::out_of_range("round out of range");
    for (const auto& epoch : epochs) {
        if (t >= epoch.start && t < epoch.start + epoch.length) return epoch;
    }
    throw std::out_of_range("round not covered by any epoch");
}

std::vector<double> RegretTrace::cumulative() const {
    std::vector<double> cum(inst_regret.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < inst_regret.size(); ++i) {
        acc += inst_regret[i];
        cum[i] = acc;
    }
    return cum;
}

double RegretTrace::cumulative_at(std::uint64_t t) const {
    if (t < 1 || t > rounds) throw std::out_of_range("round out of range");
    double acc = 0.0;
    for (std::uint64_t i = 0; i < t; ++i) acc += inst_regret[i];
    return acc;
}

double RegretTrace::total_regret() const {
    double acc = 0.0;
    for (double r : inst_regret) acc += r;
    return acc;
}

RegretTrace run_cab(const CabConfig& config, const Environment& env, std::uint64_t n,
                    std::uint64_t seed) {
    config.validate();
    if (n < 1) throw std::invalid_argument("need n >= 1 rounds");
    if (env.dim() != config.d) throw std::invalid_argument("environment dimension mismatch");
    if (env.horizon() && n > *env.horizon()) {
        throw std::invalid_argument("n exceeds the environment's pre-generated horizon");
    }

    const bool clip_rewards = config.engine.type == EngineType::Exp3 ||
                              config.engine.type == EngineType::Exp3S;
    const bool expectation_regret = env.model() == EnvModel::Stochastic;

    EngineKind kind = config.engine;
    kind.hardness_budget = config.hardness_budget;

    RegretTrace trace;
    trace.rounds = n;
    trace.algo_seed = seed;
    trace.arms.reserve(n);
    trace.rewards.reserve(n);
    trace.inst_regret.reserve(n);

    Rng rng(seed);
    for (std::uint64_t T = 1; T <= n; T *= 2) {
        const std::uint64_t M = schedule_m(config, T);
        if (M > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
            throw ArmCapExceeded(T, M, config.arm_cap + 1, config.arm_cap);
        }
        const StrategyGrid grid(config.family, static_cast<int>(M));
        if (grid.num_strategies() > config.arm_cap) {
            throw ArmCapExceeded(T, M, grid.num_strategies(), config.arm_cap);
        }

        // fresh engine per epoch, tuned for the epoch length
        auto engine = make_engine(kind, static_cast<std::size_t>(grid.num_strategies()), T);

        Epoch epoch{T, std::min(2 * T - 1, n) - T + 1, M, grid.num_strategies()};
        trace.epochs.push_back(epoch);

        for (std::uint64_t t = T; t <= std::min(2 * T - 1, n); ++t) {
            const std::size_t arm = engine->select_arm(rng);
            const Point point = grid.materialize(grid.id_from_arm(arm));
            const double reward = env.sample_reward(t, point);
            engine->update(arm, clip_rewards ? std::clamp(reward, 0.0, 1.0) : reward);

            const double optimum = env.optimal_value(t);
            const double achieved = expectation_regret ? env.eval_mean(t, point) : reward;
            trace.arms.push_back(static_cast<std::uint32_t>(arm));
            trace.rewards.push_back(reward);
            trace.inst_regret.push_back(optimum - achieved);
        }
    }
    return trace;
}

}  // namespace cabsim
