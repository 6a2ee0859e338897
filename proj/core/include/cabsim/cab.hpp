#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cabsim/engines.hpp"
#include "cabsim/environments.hpp"
#include "cabsim/partition.hpp"
#include "cabsim/strategy_grid.hpp"

namespace cabsim {

// Per-epoch grid resolution M. All logs are natural; ln T is guarded by
// max(ln T, 1) so the schedules are total at T in {1,2}; every schedule is
// floored at 1.

// ceil((T / ln T)^(1/(2 alpha + 1)))
std::uint64_t m_schedule_k1(std::uint64_t T, double alpha);

// ceil((T / (S ln T))^(1/(2 alpha + 1)))
std::uint64_t m_schedule_k1_shard(std::uint64_t T, double alpha, std::uint64_t s);

// ceil((k^((alpha-3)/2) e^(-k/2) (ln d)^(-1/2) sqrt(T / ln T))^(2/(2 alpha + k)))
std::uint64_t m_schedule_general(std::uint64_t T, double alpha, int k, int d);

// same with (S ln d)^(-1/2)
std::uint64_t m_schedule_general_shard(std::uint64_t T, double alpha, int k, int d,
                                       std::uint64_t s);

struct CabConfig {
    int d = 1;
    int k = 1;
    double alpha = 1.0;  // Hölder exponent in (0,1]
    EngineKind engine;
    std::optional<std::uint64_t> hardness_budget;  // S; selects the shard schedules
    std::uint64_t arm_cap = kDefaultArmCap;
    PartitionFamily family;
    std::optional<std::uint64_t> horizon;  // absent = anytime

    void validate() const;
};

// Schedule dispatch: k = 1 uses the diagonal schedule, k >= 2 the general
// one; a configured hardness budget switches to the shard variant.
std::uint64_t schedule_m(const CabConfig& config, std::uint64_t T);

struct Epoch {
    std::uint64_t start = 1;       // first round of the epoch (T)
    std::uint64_t length = 1;      // min(2T-1, n) - T + 1
    std::uint64_t resolution = 1;  // M
    std::uint64_t num_arms = 1;    // M^k * |family|
};

struct EpochPlan {
    std::vector<Epoch> epochs;
};

// Doubling epochs T = 1, 2, 4, ... covering exactly n rounds, with the
// per-epoch M and arm count. Throws ArmCapExceeded (with the offending T
// and M) when some epoch's grid exceeds the cap.
EpochPlan plan_epochs(const CabConfig& config, std::uint64_t n);

struct RegretTrace {
    std::uint64_t rounds = 0;
    std::vector<Epoch> epochs;
    std::vector<std::uint32_t> arms;       // one entry per round
    std::vector<double> rewards;           // realized rewards
    std::vector<double> inst_regret;       // per-round optimum minus achieved
    std::uint64_t algo_seed = 0;
    std::uint64_t env_seed = 0;
    std::string config_fingerprint;

    const Epoch& epoch_at(std::uint64_t t) const;  // t is 1-based
    std::vector<double> cumulative() const;
    double cumulative_at(std::uint64_t t) const;
    double total_regret() const;
};

// Algorithm loop: per epoch, compute M from the schedule, build the grid,
// initialize a fresh engine with K = num_strategies and T_epoch = T, then
// play rounds t = T..min(2T-1, n). Rewards fed to Exp3-family engines are
// clipped to [0,1]; UCB1 receives raw rewards. Instantaneous regret is the
// per-round optimum minus eval_mean of the played point for stochastic
// environments and minus the realized reward for adversarial ones.
RegretTrace run_cab(const CabConfig& config, const Environment& env, std::uint64_t n,
                    std::uint64_t seed);

}  // namespace cabsim
