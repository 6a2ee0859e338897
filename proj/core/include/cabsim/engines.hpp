#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cabsim/rng.hpp"

namespace cabsim {

enum class EngineType { Ucb1, Exp3, Exp3S, Uniform };

struct EngineKind {
    EngineType type = EngineType::Ucb1;
    double zeta = 1.0;  // UCB1 sub-Gaussian scale, > 0
    std::optional<std::uint64_t> hardness_budget;  // S, carried for Exp3.S runs

    static EngineKind ucb1(double zeta) { return {EngineType::Ucb1, zeta, std::nullopt}; }
    static EngineKind exp3() { return {EngineType::Exp3, 1.0, std::nullopt}; }
    static EngineKind exp3s(std::optional<std::uint64_t> s = std::nullopt) {
        return {EngineType::Exp3S, 1.0, s};
    }
    static EngineKind uniform() { return {EngineType::Uniform, 1.0, std::nullopt}; }
};

struct ArmStats {
    std::vector<std::uint64_t> counts;
    std::vector<double> means;
    std::uint64_t total_pulls = 0;
};

struct WeightVector {
    std::vector<double> weights;   // all > 0
    double gamma = 1.0;            // exploration rate in (0,1]
    double alpha_share = 0.0;      // Exp3.S sharing rate, 0 for plain Exp3
    std::uint64_t horizon = 1;     // T_epoch the parameters were tuned for
};

// Known-horizon exploration rate min(1, sqrt(K ln K / ((e-1) T)));
// 1 when K = 1.
double exp3_gamma(std::size_t num_arms, std::uint64_t t_epoch);

class BanditEngine {
public:
    virtual ~BanditEngine() = default;
    virtual std::size_t num_arms() const = 0;
    virtual std::size_t select_arm(Rng& rng) = 0;
    virtual void update(std::size_t arm, double reward) = 0;
};

// UCB-1 with confidence radius zeta * sqrt(2 ln t / count); accepts
// unbounded rewards. Unpulled arms are selected first, lowest index; all
// ties break to the lowest index.
class Ucb1Engine final : public BanditEngine {
public:
    Ucb1Engine(std::size_t num_arms, double zeta);

    std::size_t num_arms() const override { return stats_.counts.size(); }
    std::size_t select_arm(Rng& rng) override;
    void update(std::size_t arm, double reward) override;

    const ArmStats& stats() const { return stats_; }
    double zeta() const { return zeta_; }

private:
    ArmStats stats_;
    double zeta_;
};

// Exp3 / Exp3.S over rewards in [0,1] (callers clip). Selection probability
// p_i = (1-gamma) w_i / sum(w) + gamma / K. The update applies the
// importance-weighted exponential step to the played arm; with
// alpha_share > 0 it then adds (e * alpha_share / K) * sum(w) to every
// weight (Exp3.S). Weights are renormalized to mean 1 when the sum exceeds
// an overflow guard, which leaves the probabilities unchanged.
class Exp3Engine final : public BanditEngine {
public:
    Exp3Engine(std::size_t num_arms, double gamma, double alpha_share, std::uint64_t t_epoch);

    std::size_t num_arms() const override { return state_.weights.size(); }
    std::size_t select_arm(Rng& rng) override;
    void update(std::size_t arm, double reward) override;

    std::vector<double> probabilities() const;
    const WeightVector& weights() const { return state_; }

private:
    WeightVector state_;
};

// Plays uniformly at random and never learns; reference baseline.
class UniformEngine final : public BanditEngine {
public:
    explicit UniformEngine(std::size_t num_arms);

    std::size_t num_arms() const override { return num_arms_; }
    std::size_t select_arm(Rng& rng) override;
    void update(std::size_t arm, double reward) override;

private:
    std::size_t num_arms_;
};

// Fresh engine in its initial state. UCB1: zeroed stats. Exp3/Exp3.S: unit
// weights with the known-horizon gamma; Exp3.S additionally
// alpha_share = 1 / t_epoch.
std::unique_ptr<BanditEngine> make_engine(const EngineKind& kind, std::size_t num_arms,
                                          std::uint64_t t_epoch);

// 1 + |{l : seq[l] != seq[l+1]}|; equality element-wise for tuple values.
template <typename Seq>
std::size_t hardness(const Seq& seq) {
    auto it = std::begin(seq);
    const auto end = std::end(seq);
    if (it == end) throw std::invalid_argument("hardness of an empty sequence");
    std::size_t h = 1;
    auto prev = it;
    for (++it; it != end; ++it, ++prev) {
        if (!(*prev == *it)) ++h;
    }
    return h;
}

}  // namespace cabsim
