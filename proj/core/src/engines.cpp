#include "cabsim/engines.hpp"

#include <cmath>
#include <limits>

namespace cabsim {

namespace {

constexpr double kE = 2.718281828459045235360287471353;
constexpr double kWeightGuard = 1e100;

void check_reward(double reward) {
    if (!std::isfinite(reward)) throw std::invalid_argument("reward must be finite");
}

}  // namespace

double exp3_gamma(std::size_t num_arms, std::uint64_t t_epoch) {
    if (num_arms < 1 || t_epoch < 1) throw std::invalid_argument("need K >= 1 and T >= 1");
    if (num_arms == 1) return 1.0;
    const double k = static_cast<double>(num_arms);
    const double g = std::sqrt(k * std::log(k) / ((kE - 1.0) * static_cast<double>(t_epoch)));
    return std::min(1.0, g);
}

Ucb1Engine::Ucb1Engine(std::size_t num_arms, double zeta) : zeta_(zeta) {
    if (num_arms < 1) throw std::invalid_argument("need K >= 1");
    if (!(zeta > 0.0)) throw std::invalid_argument("UCB1 requires zeta > 0");
    stats_.counts.assign(num_arms, 0);
    stats_.means.assign(num_arms, 0.0);
}

std::size_t Ucb1Engine::select_arm(Rng&) {
    const std::size_t k = stats_.counts.size();
    for (std::size_t i = 0; i < k; ++i) {
        if (stats_.counts[i] == 0) return i;
    }
    const double log_t = std::log(static_cast<double>(stats_.total_pulls));
    std::size_t best = 0;
    double best_ucb = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        const double radius =
            zeta_ * std::sqrt(2.0 * log_t / static_cast<double>(stats_.counts[i]));
        const double ucb = stats_.means[i] + radius;
        if (ucb > best_ucb) {
            best_ucb = ucb;
            best = i;
        }
    }
    return best;
}

void Ucb1Engine::update(std::size_t arm, double reward) {
    check_reward(reward);
    if (arm >= stats_.counts.size()) throw std::out_of_range("arm index out of range");
    auto& count = stats_.counts[arm];
    ++count;
    ++stats_.total_pulls;
    stats_.means[arm] += (reward - stats_.means[arm]) / static_cast<double>(count);
}

Exp3Engine::Exp3Engine(std::size_t num_arms, double gamma, double alpha_share,
                       std::uint64_t t_epoch) {
    if (num_arms < 1) throw std::invalid_argument("need K >= 1");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0,1]");
    if (alpha_share < 0.0 || alpha_share > 1.0) {
        // 1/t_epoch hits 1 exactly in the one-round epoch
        throw std::invalid_argument("alpha_share must be in [0,1]");
    }
    state_.weights.assign(num_arms, 1.0);
    state_.gamma = gamma;
    state_.alpha_share = alpha_share;
    state_.horizon = t_epoch;
}

std::vector<double> Exp3Engine::probabilities() const {
    const std::size_t k = state_.weights.size();
    double sum = 0.0;
    for (double w : state_.weights) sum += w;
    std::vector<double> p(k);
    for (std::size_t i = 0; i < k; ++i) {
        p[i] = (1.0 - state_.gamma) * state_.weights[i] / sum +
               state_.gamma / static_cast<double>(k);
    }
    return p;
}

std::size_t Exp3Engine::select_arm(Rng& rng) {
    const auto p = probabilities();
    const double u = rng.next_double();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return i;
    }
    return p.size() - 1;
}

void Exp3Engine::update(std::size_t arm, double reward) {
    check_reward(reward);
    const std::size_t k = state_.weights.size();
    if (arm >= k) throw std::out_of_range("arm index out of range");

    const auto p = probabilities();
    const double estimate = reward / p[arm];  // importance-weighted; 0 for other arms
    state_.weights[arm] *= std::exp(state_.gamma * estimate / static_cast<double>(k));

    double sum = 0.0;
    for (double w : state_.weights) sum += w;

    if (state_.alpha_share > 0.0) {
        const double share = kE * state_.alpha_share * sum / static_cast<double>(k);
        for (double& w : state_.weights) w += share;
        sum += share * static_cast<double>(k);
    }

    if (sum > kWeightGuard) {
        const double scale = static_cast<double>(k) / sum;
        for (double& w : state_.weights) w *= scale;
    }
}

UniformEngine::UniformEngine(std::size_t num_arms) : num_arms_(num_arms) {
    if (num_arms < 1) throw std::invalid_argument("need K >= 1");
}

std::size_t UniformEngine::select_arm(Rng& rng) {
    return static_cast<std::size_t>(rng.below(num_arms_));
}

void UniformEngine::update(std::size_t, double reward) { check_reward(reward); }

std::unique_ptr<BanditEngine> make_engine(const EngineKind& kind, std::size_t num_arms,
                                          std::uint64_t t_epoch) {
    if (num_arms < 1 || t_epoch < 1) throw std::invalid_argument("need K >= 1 and T >= 1");
    if (kind.hardness_budget && *kind.hardness_budget < 1) {
        throw std::invalid_argument("hardness budget S must be >= 1");
    }
    switch (kind.type) {
        case EngineType::Ucb1:
            return std::make_unique<Ucb1Engine>(num_arms, kind.zeta);
        case EngineType::Exp3:
            return std::make_unique<Exp3Engine>(num_arms, exp3_gamma(num_arms, t_epoch), 0.0,
                                                t_epoch);
        case EngineType::Exp3S:
            return std::make_unique<Exp3Engine>(num_arms, exp3_gamma(num_arms, t_epoch),
                                                1.0 / static_cast<double>(t_epoch), t_epoch);
        case EngineType::Uniform:
            return std::make_unique<UniformEngine>(num_arms);
    }
    throw std::invalid_argument("unknown engine type");
}

}  // namespace cabsim
