#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cabsim/rng.hpp"

namespace cabsim {

// g : [0,1]^k -> [0,1] with a locally uniform Hölder modulus
// |g(u) - g(v)| <= L ||u - v||^alpha for ||u - v|| <= delta, and a known
// optimum for exact regret accounting.
class HolderFunction {
public:
    enum class Kind { Cone, MultiPeak, Table };

    // max(0, value - ||u - peak||^alpha); L = 1 for any alpha in (0,1].
    static HolderFunction cone(int k, double alpha, std::vector<double> peak,
                               double peak_value = 1.0);
    // max over several cones with individual peak values.
    static HolderFunction multi_peak(int k, double alpha,
                                     std::vector<std::vector<double>> peaks,
                                     std::vector<double> values);
    // Piecewise-linear table on equispaced nodes over [0,1]; k = 1, alpha = 1.
    static HolderFunction table(std::vector<double> values);

    double operator()(std::span<const double> u) const;

    Kind kind() const { return kind_; }
    int arity() const { return k_; }
    double exponent() const { return alpha_; }
    double lipschitz() const { return lipschitz_; }
    double restriction() const { return restriction_; }  // delta; inf for built-ins

    // Best peak, closed form.
    const std::vector<double>& peak_location() const { return best_peak_; }
    double peak_value() const { return best_value_; }

private:
    HolderFunction() = default;

    Kind kind_ = Kind::Cone;
    int k_ = 1;
    double alpha_ = 1.0;
    double lipschitz_ = 1.0;
    double restriction_ = 0.0;
    std::vector<std::vector<double>> peaks_;
    std::vector<double> peak_values_;
    std::vector<double> table_;
    std::vector<double> best_peak_;
    double best_value_ = 0.0;
};

// Brute-force maximum of g over [0,1]^k: full grid at resolution 1/1000
// (k=1), 1/200 (k=2), 1/60 (k=3), then one ternary-search pass per
// coordinate around the best grid point. Throws OracleUnsupported for k > 3.
struct OracleResult {
    std::vector<double> argmax;
    double value = 0.0;
};
OracleResult grid_search_max(const std::function<double(std::span<const double>)>& g, int k);

enum class EnvModel { Stochastic, Adversarial, ShardSwitching, AdvLowerBound };

// Reward oracle; a deterministic state machine over (seed, t). Realized
// rewards are pure functions of (seed, t, point), which makes adversarial
// environments oblivious by construction.
class Environment {
public:
    virtual ~Environment() = default;

    virtual EnvModel model() const = 0;
    virtual int dim() const = 0;
    virtual int active_arity() const = 0;

    // Exact expected reward of the point at round t (expectation over the
    // environment's own randomness only).
    virtual double eval_mean(std::uint64_t t, std::span<const double> point) const = 0;

    // Realized reward at round t; rounds are 1-based.
    virtual double sample_reward(std::uint64_t t, std::span<const double> point) const = 0;

    // Per-round optimum consistent with the regret definition.
    virtual double optimal_value(std::uint64_t t) const = 0;

    virtual std::optional<std::uint64_t> horizon() const { return std::nullopt; }

    // true when rewards are guaranteed to lie in [0,1] (adversarial models).
    virtual bool bounded_rewards() const = 0;
};

// Stochastic model: reward = mean(active coords) + Gaussian(0, zeta^2).
// The optional random-coordinate mode (k = 1 only) draws the active
// coordinate fresh each round from a distribution over {0..d-1}.
class StochasticEnv final : public Environment {
public:
    StochasticEnv(int d, HolderFunction mean_fn, double zeta, std::vector<int> active_tuple,
                  std::uint64_t seed);
    static StochasticEnv random_coordinate(int d, HolderFunction mean_fn, double zeta,
                                           std::vector<double> coord_probs,  // empty = uniform
                                           std::uint64_t seed);

    EnvModel model() const override { return EnvModel::Stochastic; }
    int dim() const override { return d_; }
    int active_arity() const override { return mean_fn_.arity(); }
    double eval_mean(std::uint64_t t, std::span<const double> point) const override;
    double sample_reward(std::uint64_t t, std::span<const double> point) const override;
    double optimal_value(std::uint64_t t) const override;
    bool bounded_rewards() const override { return false; }

    const HolderFunction& mean_function() const { return mean_fn_; }
    double noise_scale() const { return zeta_; }

private:
    int d_;
    HolderFunction mean_fn_;
    double zeta_;
    std::vector<int> tuple_;
    std::vector<double> coord_probs_;  // non-empty => random-coordinate mode
    std::uint64_t seed_;
    double optimum_;
};

// Sequence of k-tuples with hardness exactly S: S-1 change points placed
// uniformly at random among {1..n-1}, segment tuples uniform over
// distinct-index k-tuples with adjacent segments forced to differ.
std::vector<std::vector<int>> make_shard_sequence(int d, int k, std::uint64_t s,
                                                  std::uint64_t n, std::uint64_t seed);

// Oblivious adversarial model: the whole (g_t, tuple_t) sequence is fixed
// by (seed, parameters) before play. Three built-in regimes: fixed function
// with fixed tuple, fixed function with an S-hard switching tuple sequence,
// and a cone whose peak drifts with bounded per-round motion.
class AdversarialEnv final : public Environment {
public:
    static AdversarialEnv fixed(int d, HolderFunction g, std::vector<int> tuple,
                                std::uint64_t horizon, std::uint64_t seed);
    static AdversarialEnv shard_switching(int d, HolderFunction g, std::uint64_t s,
                                          std::uint64_t horizon, std::uint64_t seed);
    static AdversarialEnv drifting_peak(int d, int k, double alpha, std::vector<int> tuple,
                                        double amplitude, std::uint64_t period,
                                        std::uint64_t horizon, std::uint64_t seed);

    EnvModel model() const override;
    int dim() const override { return d_; }
    int active_arity() const override { return k_; }
    double eval_mean(std::uint64_t t, std::span<const double> point) const override;
    double sample_reward(std::uint64_t t, std::span<const double> point) const override;
    double optimal_value(std::uint64_t t) const override;
    std::optional<std::uint64_t> horizon() const override { return horizon_; }
    bool bounded_rewards() const override { return true; }

    std::span<const int> tuple_at(std::uint64_t t) const;
    std::uint64_t declared_hardness() const { return hardness_; }

private:
    enum class Mode { Fixed, Shard, Drift };

    AdversarialEnv() = default;
    std::vector<double> drift_peak(std::uint64_t t) const;

    Mode mode_ = Mode::Fixed;
    int d_ = 1;
    int k_ = 1;
    std::optional<HolderFunction> g_;
    std::vector<int> fixed_tuple_;
    std::vector<int> tuple_seq_;  // flattened, stride k (shard mode)
    std::uint64_t hardness_ = 1;
    std::uint64_t horizon_ = 0;
    std::uint64_t seed_ = 0;
    double drift_alpha_ = 1.0;
    double drift_amplitude_ = 0.0;
    std::uint64_t drift_period_ = 1;
    std::vector<double> drift_phase_;
    double optimum_ = 0.0;
};

// The explicit diagonal-defeating adversary: a hidden ordered 2-partition
// (A1, A2) of {0..d-1}, both blocks non-empty, drawn uniformly at
// construction. Each round a fair coin picks h1 (bump on [0,1/2]) or h2
// (bump on [1/2,1]) and the active coordinate uniformly inside the matching
// block. Every diagonal point earns expected reward <= 1/2 while the mixed
// point (a on A1, b on A2) earns 1.
class AdvLowerBoundEnv final : public Environment {
public:
    AdvLowerBoundEnv(int d, std::uint64_t seed);

    EnvModel model() const override { return EnvModel::AdvLowerBound; }
    int dim() const override { return d_; }
    int active_arity() const override { return 1; }
    double eval_mean(std::uint64_t t, std::span<const double> point) const override;
    double sample_reward(std::uint64_t t, std::span<const double> point) const override;
    double optimal_value(std::uint64_t) const override { return 1.0; }
    bool bounded_rewards() const override { return true; }

    const std::vector<int>& block_one() const { return block_one_; }
    const std::vector<int>& block_two() const { return block_two_; }
    std::vector<double> optimal_point() const;

    // sin^2 bumps: maxima 1 at x = 1/4 and x = 3/4, vanishing at the seams.
    static double bump_low(double x);   // support [0, 1/2]
    static double bump_high(double x);  // support [1/2, 1]
    static constexpr double kPeakLow = 0.25;
    static constexpr double kPeakHigh = 0.75;

private:
    int d_;
    std::uint64_t seed_;
    std::vector<int> block_one_;
    std::vector<int> block_two_;
};

// Parsed environment description; mirrors the JSON wire format.
struct FunctionSpec {
    std::string kind = "cone";                // cone | multipeak | table
    std::vector<std::vector<double>> peaks;   // peak locations
    std::vector<double> peak_values;
    std::vector<double> table;
    // draw the cone peak uniformly from [0.05, 0.95]^k out of the
    // environment seed, one peak per environment instance
    bool random_peak = false;
};

struct EnvSpec {
    std::string model = "stochastic";  // stochastic | adversarial | shard_switching | adv_lower_bound
    int d = 1;
    int k = 1;
    double alpha = 1.0;
    double L = 1.0;
    double zeta = 0.0;
    std::vector<int> tuple;            // default {0..k-1}
    bool random_coordinate = false;
    std::vector<double> coordinate_probs;
    std::optional<std::uint64_t> shard_s;
    std::optional<std::uint64_t> shard_seed;
    double drift_amplitude = 0.0;
    std::uint64_t drift_period = 4096;
    FunctionSpec function;
    std::optional<std::uint64_t> seed;  // pinned environment seed
};

EnvSpec env_spec_from_json(const std::string& text);
std::string env_spec_to_json(const EnvSpec& spec);

// Instantiates the environment. `fallback_seed` is used when the spec does
// not pin one; `horizon` is required by adversarial models.
std::unique_ptr<Environment> build_environment(const EnvSpec& spec, std::uint64_t fallback_seed,
                                               std::optional<std::uint64_t> horizon);

}  // namespace cabsim
