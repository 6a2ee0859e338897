#include "cabsim/environments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cabsim/errors.hpp"
#include "cabsim/engines.hpp"
#include "cabsim/partition.hpp"

namespace cabsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double distance(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double diff = u[i] - v[i];
        s += diff * diff;
    }
    return std::sqrt(s);
}

void check_unit_cube(std::span<const double> u, const char* what) {
    for (double x : u) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
        }
    }
}

void check_active_tuple(const std::vector<int>& tuple, int d, int k) {
    if (static_cast<int>(tuple.size()) != k) {
        throw std::invalid_argument("active tuple must have k entries");
    }
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] < 0 || tuple[i] >= d) {
            throw std::invalid_argument("active tuple index out of range");
        }
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
            if (tuple[i] == tuple[j]) {
                throw std::invalid_argument("active tuple indices must be distinct");
            }
        }
    }
}

std::vector<double> gather(std::span<const double> point, std::span<const int> tuple) {
    std::vector<double> u(tuple.size());
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        u[j] = point[static_cast<std::size_t>(tuple[j])];
    }
    return u;
}

}  // namespace

// -- HolderFunction -----------------------------------------------------------

HolderFunction HolderFunction::cone(int k, double alpha, std::vector<double> peak,
                                    double peak_value) {
    return multi_peak(k, alpha, {std::move(peak)}, {peak_value});
}

HolderFunction HolderFunction::multi_peak(int k, double alpha,
                                          std::vector<std::vector<double>> peaks,
                                          std::vector<double> values) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
    if (peaks.empty() || peaks.size() != values.size()) {
        throw std::invalid_argument("need one value per peak");
    }
    for (const auto& p : peaks) {
        if (static_cast<int>(p.size()) != k) throw std::invalid_argument("peak arity mismatch");
        check_unit_cube(p, "peak");
    }
    for (double v : values) {
        if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("peak value must be in (0,1]");
    }
    HolderFunction f;
    f.kind_ = peaks.size() == 1 ? Kind::Cone : Kind::MultiPeak;
    f.k_ = k;
    f.alpha_ = alpha;
    f.lipschitz_ = 1.0;
    f.restriction_ = std::numeric_limits<double>::infinity();
    const auto best = std::max_element(values.begin(), values.end()) - values.begin();
    f.best_peak_ = peaks[static_cast<std::size_t>(best)];
    f.best_value_ = values[static_cast<std::size_t>(best)];
    f.peaks_ = std::move(peaks);
    f.peak_values_ = std::move(values);
    return f;
}

HolderFunction HolderFunction::table(std::vector<double> values) {
    if (values.size() < 2) throw std::invalid_argument("table needs at least 2 nodes");
    check_unit_cube(values, "table values");
    HolderFunction f;
    f.kind_ = Kind::Table;
    f.k_ = 1;
    f.alpha_ = 1.0;
    f.restriction_ = std::numeric_limits<double>::infinity();
    const double steps = static_cast<double>(values.size() - 1);
    double max_slope = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        max_slope = std::max(max_slope, std::fabs(values[i + 1] - values[i]) * steps);
    }
    f.lipschitz_ = max_slope;
    const auto best = std::max_element(values.begin(), values.end()) - values.begin();
    f.best_peak_ = {static_cast<double>(best) / steps};
    f.best_value_ = values[static_cast<std::size_t>(best)];
    f.table_ = std::move(values);
    return f;
}

double HolderFunction::operator()(std::span<const double> u) const {
    if (static_cast<int>(u.size()) != k_) throw std::invalid_argument("arity mismatch");
    if (kind_ == Kind::Table) {
        const double pos = std::clamp(u[0], 0.0, 1.0) * static_cast<double>(table_.size() - 1);
        const auto i = std::min(static_cast<std::size_t>(pos), table_.size() - 2);
        const double frac = pos - static_cast<double>(i);
        return table_[i] + frac * (table_[i + 1] - table_[i]);
    }
    double best = 0.0;
    for (std::size_t p = 0; p < peaks_.size(); ++p) {
        const double v = peak_values_[p] - std::pow(distance(u, peaks_[p]), alpha_);
        best = std::max(best, v);
    }
    return best;
}

// -- Optimum oracle -----------------------------------------------------------

OracleResult grid_search_max(const std::function<double(std::span<const double>)>& g, int k) {
    if (k < 1 || k > 3) throw OracleUnsupported("grid oracle supports k in {1,2,3}");
    const int res = k == 1 ? 1000 : (k == 2 ? 200 : 60);

    std::vector<double> point(static_cast<std::size_t>(k), 0.0);
    std::vector<double> best_point = point;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    for (;;) {
        for (int j = 0; j < k; ++j) {
            point[static_cast<std::size_t>(j)] =
                static_cast<double>(idx[static_cast<std::size_t>(j)]) / res;
        }
        const double v = g(point);
        if (v > best) {
            best = v;
            best_point = point;
        }
        int j = k - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == res) {
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++idx[static_cast<std::size_t>(j)];
    }

    // One ternary-search pass per coordinate within +-1 grid cell.
    const double h = 1.0 / res;
    point = best_point;
    for (int j = 0; j < k; ++j) {
        double lo = std::max(0.0, best_point[static_cast<std::size_t>(j)] - h);
        double hi = std::min(1.0, best_point[static_cast<std::size_t>(j)] + h);
        for (int iter = 0; iter < 200; ++iter) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            point[static_cast<std::size_t>(j)] = m1;
            const double v1 = g(point);
            point[static_cast<std::size_t>(j)] = m2;
            const double v2 = g(point);
            if (v1 < v2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        point[static_cast<std::size_t>(j)] = (lo + hi) / 2.0;
        const double v = g(point);
        if (v > best) {
            best = v;
            best_point = point;
        } else {
            point = best_point;
        }
    }
    return {best_point, best};
}

// -- StochasticEnv ------------------------------------------------------------

StochasticEnv::StochasticEnv(int d, HolderFunction mean_fn, double zeta,
                             std::vector<int> active_tuple, std::uint64_t seed)
    : d_(d), mean_fn_(std::move(mean_fn)), zeta_(zeta), tuple_(std::move(active_tuple)),
      seed_(seed) {
    if (d_ < mean_fn_.arity()) throw std::invalid_argument("d must be >= k");
    if (zeta_ < 0.0) throw std::invalid_argument("zeta must be >= 0");
    check_active_tuple(tuple_, d_, mean_fn_.arity());
    optimum_ = grid_search_max(
        [this](std::span<const double> u) { return mean_fn_(u); }, mean_fn_.arity()).value;
}

StochasticEnv StochasticEnv::random_coordinate(int d, HolderFunction mean_fn, double zeta,
                                               std::vector<double> coord_probs,
                                               std::uint64_t seed) {
    if (mean_fn.arity() != 1) {
        throw std::invalid_argument("random-coordinate mode requires k = 1");
    }
    StochasticEnv env(d, std::move(mean_fn), zeta, {0}, seed);
    if (coord_probs.empty()) {
        coord_probs.assign(static_cast<std::size_t>(d), 1.0 / d);
    } else {
        if (static_cast<int>(coord_probs.size()) != d) {
            throw std::invalid_argument("coordinate distribution must have d entries");
        }
        double sum = 0.0;
        for (double p : coord_probs) {
            if (p < 0.0) throw std::invalid_argument("coordinate probabilities must be >= 0");
            sum += p;
        }
        if (!(sum > 0.0)) throw std::invalid_argument("coordinate distribution must not be zero");
        for (double& p : coord_probs) p /= sum;
    }
    env.coord_probs_ = std::move(coord_probs);
    return env;
}

double StochasticEnv::eval_mean(std::uint64_t, std::span<const double> point) const {
    if (static_cast<int>(point.size()) != d_) throw std::invalid_argument("point dim mismatch");
    if (coord_probs_.empty()) {
        return mean_fn_(gather(point, tuple_));
    }
    double mean = 0.0;
    for (int i = 0; i < d_; ++i) {
        const double u = point[static_cast<std::size_t>(i)];
        mean += coord_probs_[static_cast<std::size_t>(i)] * mean_fn_(std::span(&u, 1));
    }
    return mean;
}

double StochasticEnv::sample_reward(std::uint64_t t, std::span<const double> point) const {
    if (static_cast<int>(point.size()) != d_) throw std::invalid_argument("point dim mismatch");
    Rng sub = Rng::substream(seed_, t);
    double mean;
    if (coord_probs_.empty()) {
        mean = mean_fn_(gather(point, tuple_));
    } else {
        // inverse-CDF draw of the round's active coordinate
        const double u = sub.next_double();
        double acc = 0.0;
        int active = d_ - 1;
        for (int i = 0; i < d_; ++i) {
            acc += coord_probs_[static_cast<std::size_t>(i)];
            if (u < acc) {
                active = i;
                break;
            }
        }
        const double x = point[static_cast<std::size_t>(active)];
        mean = mean_fn_(std::span(&x, 1));
    }
    return zeta_ > 0.0 ? mean + sub.normal(0.0, zeta_) : mean;
}

double StochasticEnv::optimal_value(std::uint64_t) const { return optimum_; }

// -- shard sequences ----------------------------------------------------------

std::vector<std::vector<int>> make_shard_sequence(int d, int k, std::uint64_t s,
                                                  std::uint64_t n, std::uint64_t seed) {
    if (s < 1 || s > n) throw std::invalid_argument("need 1 <= S <= n");
    Rng rng(seed);

    // S-1 distinct change points among {1..n-1}, uniform.
    std::vector<std::uint64_t> candidates(n - 1);
    for (std::uint64_t i = 0; i + 1 < n; ++i) candidates[i] = i + 1;
    std::vector<std::uint64_t> changes;
    for (std::uint64_t j = 0; j + 1 < s; ++j) {
        const std::uint64_t pick = j + rng.below(candidates.size() - j);
        std::swap(candidates[j], candidates[pick]);
        changes.push_back(candidates[j]);
    }
    std::sort(changes.begin(), changes.end());

    std::vector<std::vector<int>> seq;
    seq.reserve(n);
    std::vector<int> current = random_distinct_tuple(d, k, rng);
    std::size_t next_change = 0;
    for (std::uint64_t t = 0; t < n; ++t) {
        if (next_change < changes.size() && t == changes[next_change]) {
            std::vector<int> fresh;
            do {
                fresh = random_distinct_tuple(d, k, rng);
            } while (fresh == current);  // adjacent segments must differ
            current = std::move(fresh);
            ++next_change;
        }
        seq.push_back(current);
    }
    return seq;
}

// -- AdversarialEnv -----------------------------------------------------------

AdversarialEnv AdversarialEnv::fixed(int d, HolderFunction g, std::vector<int> tuple,
                                     std::uint64_t horizon, std::uint64_t seed) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    AdversarialEnv env;
    env.mode_ = Mode::Fixed;
    env.d_ = d;
    env.k_ = g.arity();
    check_active_tuple(tuple, d, env.k_);
    env.optimum_ = grid_search_max([&g](std::span<const double> u) { return g(u); },
                                   g.arity()).value;
    env.g_ = std::move(g);
    env.fixed_tuple_ = std::move(tuple);
    env.horizon_ = horizon;
    env.seed_ = seed;
    env.hardness_ = 1;
    return env;
}

AdversarialEnv AdversarialEnv::shard_switching(int d, HolderFunction g, std::uint64_t s,
                                               std::uint64_t horizon, std::uint64_t seed) {
    const int k = g.arity();
    std::vector<int> first_tuple(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) first_tuple[static_cast<std::size_t>(j)] = j;
    AdversarialEnv env = fixed(d, std::move(g), std::move(first_tuple), horizon, seed);
    env.mode_ = Mode::Shard;
    const auto seq = make_shard_sequence(d, env.k_, s, horizon, seed);
    env.tuple_seq_.reserve(seq.size() * static_cast<std::size_t>(env.k_));
    for (const auto& tuple : seq) {
        env.tuple_seq_.insert(env.tuple_seq_.end(), tuple.begin(), tuple.end());
    }
    env.hardness_ = hardness(seq);
    return env;
}

AdversarialEnv AdversarialEnv::drifting_peak(int d, int k, double alpha, std::vector<int> tuple,
                                             double amplitude, std::uint64_t period,
                                             std::uint64_t horizon, std::uint64_t seed) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
    if (!(amplitude >= 0.0 && amplitude <= 0.5)) {
        throw std::invalid_argument("drift amplitude must be in [0, 0.5]");
    }
    if (period < 1) throw std::invalid_argument("drift period must be >= 1");
    AdversarialEnv env;
    env.mode_ = Mode::Drift;
    env.d_ = d;
    env.k_ = k;
    check_active_tuple(tuple, d, k);
    env.fixed_tuple_ = std::move(tuple);
    env.horizon_ = horizon;
    env.seed_ = seed;
    env.hardness_ = 1;
    env.drift_alpha_ = alpha;
    env.drift_amplitude_ = amplitude;
    env.drift_period_ = period;
    Rng rng(seed);
    env.drift_phase_.resize(static_cast<std::size_t>(k));
    for (auto& phase : env.drift_phase_) phase = kTwoPi * rng.next_double();
    env.optimum_ = 1.0;  // every g_t is a unit-height cone with its peak inside [0,1]^k
    return env;
}

EnvModel AdversarialEnv::model() const {
    return mode_ == Mode::Shard ? EnvModel::ShardSwitching : EnvModel::Adversarial;
}

std::span<const int> AdversarialEnv::tuple_at(std::uint64_t t) const {
    if (t < 1 || t > horizon_) {
        throw HorizonExceeded("round " + std::to_string(t) + " outside horizon " +
                              std::to_string(horizon_));
    }
    if (mode_ == Mode::Shard) {
        const auto k = static_cast<std::size_t>(k_);
        return std::span(tuple_seq_).subspan((t - 1) * k, k);
    }
    return fixed_tuple_;
}

std::vector<double> AdversarialEnv::drift_peak(std::uint64_t t) const {
    std::vector<double> peak(static_cast<std::size_t>(k_));
    const double phase_t = kTwoPi * static_cast<double>(t % drift_period_) /
                           static_cast<double>(drift_period_);
    for (int j = 0; j < k_; ++j) {
        peak[static_cast<std::size_t>(j)] =
            0.5 + drift_amplitude_ * std::sin(phase_t + drift_phase_[static_cast<std::size_t>(j)]);
    }
    return peak;
}

double AdversarialEnv::eval_mean(std::uint64_t t, std::span<const double> point) const {
    // deterministic rewards: the realized value is its own expectation
    return sample_reward(t, point);
}

double AdversarialEnv::sample_reward(std::uint64_t t, std::span<const double> point) const {
    if (static_cast<int>(point.size()) != d_) throw std::invalid_argument("point dim mismatch");
    const auto u = gather(point, tuple_at(t));
    if (mode_ == Mode::Drift) {
        const auto peak = drift_peak(t);
        return std::max(0.0, 1.0 - std::pow(distance(u, peak), drift_alpha_));
    }
    return (*g_)(u);
}

double AdversarialEnv::optimal_value(std::uint64_t) const { return optimum_; }

// -- AdvLowerBoundEnv ---------------------------------------------------------

double AdvLowerBoundEnv::bump_low(double x) {
    if (x < 0.0 || x > 0.5) return 0.0;
    const double s = std::sin(kTwoPi * x);
    return s * s;
}

double AdvLowerBoundEnv::bump_high(double x) {
    if (x < 0.5 || x > 1.0) return 0.0;
    const double s = std::sin(kTwoPi * (x - 0.5));
    return s * s;
}

AdvLowerBoundEnv::AdvLowerBoundEnv(int d, std::uint64_t seed) : d_(d), seed_(seed) {
    if (d < 2) throw std::invalid_argument("need d >= 2 for two non-empty blocks");
    Rng rng(seed);
    std::vector<int> labels(static_cast<std::size_t>(d));
    // uniform over the 2^d - 2 ordered 2-partitions with both blocks non-empty
    for (;;) {
        int ones = 0;
        for (auto& l : labels) {
            l = static_cast<int>(rng.below(2));
            ones += l;
        }
        if (ones > 0 && ones < d) break;
    }
    for (int i = 0; i < d; ++i) {
        (labels[static_cast<std::size_t>(i)] == 0 ? block_one_ : block_two_).push_back(i);
    }
}

double AdvLowerBoundEnv::eval_mean(std::uint64_t, std::span<const double> point) const {
    if (static_cast<int>(point.size()) != d_) throw std::invalid_argument("point dim mismatch");
    double sum_low = 0.0;
    for (int i : block_one_) sum_low += bump_low(point[static_cast<std::size_t>(i)]);
    double sum_high = 0.0;
    for (int i : block_two_) sum_high += bump_high(point[static_cast<std::size_t>(i)]);
    return 0.5 * sum_low / static_cast<double>(block_one_.size()) +
           0.5 * sum_high / static_cast<double>(block_two_.size());
}

double AdvLowerBoundEnv::sample_reward(std::uint64_t t, std::span<const double> point) const {
    if (static_cast<int>(point.size()) != d_) throw std::invalid_argument("point dim mismatch");
    Rng sub = Rng::substream(seed_, t);
    const bool low = sub.below(2) == 0;
    const auto& block = low ? block_one_ : block_two_;
    const int active = block[static_cast<std::size_t>(sub.below(block.size()))];
    const double x = point[static_cast<std::size_t>(active)];
    return low ? bump_low(x) : bump_high(x);
}

std::vector<double> AdvLowerBoundEnv::optimal_point() const {
    std::vector<double> point(static_cast<std::size_t>(d_), kPeakLow);
    for (int i : block_two_) point[static_cast<std::size_t>(i)] = kPeakHigh;
    return point;
}

// -- JSON wire format ---------------------------------------------------------

namespace {

FunctionSpec function_spec_from(const nlohmann::json& j) {
    FunctionSpec f;
    f.kind = j.value("kind", std::string("cone"));
    if (j.contains("peaks")) f.peaks = j.at("peaks").get<std::vector<std::vector<double>>>();
    if (j.contains("peak_values")) f.peak_values = j.at("peak_values").get<std::vector<double>>();
    if (j.contains("table")) f.table = j.at("table").get<std::vector<double>>();
    f.random_peak = j.value("random_peak", false);
    return f;
}

nlohmann::json function_spec_to(const FunctionSpec& f) {
    nlohmann::json j;
    j["kind"] = f.kind;
    if (!f.peaks.empty()) j["peaks"] = f.peaks;
    if (!f.peak_values.empty()) j["peak_values"] = f.peak_values;
    if (!f.table.empty()) j["table"] = f.table;
    if (f.random_peak) j["random_peak"] = true;
    return j;
}

EnvSpec env_spec_from(const nlohmann::json& j) {
    EnvSpec spec;
    spec.model = j.value("model", std::string("stochastic"));
    spec.d = j.value("d", 1);
    spec.k = j.value("k", 1);
    spec.alpha = j.value("alpha", 1.0);
    spec.L = j.value("L", 1.0);
    spec.zeta = j.value("zeta", 0.0);
    if (j.contains("tuple")) spec.tuple = j.at("tuple").get<std::vector<int>>();
    spec.random_coordinate = j.value("random_coordinate", false);
    if (j.contains("coordinate_probs")) {
        spec.coordinate_probs = j.at("coordinate_probs").get<std::vector<double>>();
    }
    if (j.contains("shard")) {
        spec.shard_s = j.at("shard").at("S").get<std::uint64_t>();
        if (j.at("shard").contains("seed")) {
            spec.shard_seed = j.at("shard").at("seed").get<std::uint64_t>();
        }
    }
    if (j.contains("drift")) {
        spec.drift_amplitude = j.at("drift").value("amplitude", 0.2);
        spec.drift_period = j.at("drift").value("period", std::uint64_t{4096});
    }
    if (j.contains("function")) spec.function = function_spec_from(j.at("function"));
    if (j.contains("seed") && !j.at("seed").is_null()) {
        spec.seed = j.at("seed").get<std::uint64_t>();
    }
    return spec;
}

nlohmann::json env_spec_to(const EnvSpec& spec) {
    nlohmann::json j;
    j["model"] = spec.model;
    j["d"] = spec.d;
    j["k"] = spec.k;
    j["alpha"] = spec.alpha;
    j["L"] = spec.L;
    j["zeta"] = spec.zeta;
    if (!spec.tuple.empty()) j["tuple"] = spec.tuple;
    if (spec.random_coordinate) j["random_coordinate"] = true;
    if (!spec.coordinate_probs.empty()) j["coordinate_probs"] = spec.coordinate_probs;
    if (spec.shard_s) {
        j["shard"]["S"] = *spec.shard_s;
        if (spec.shard_seed) j["shard"]["seed"] = *spec.shard_seed;
    }
    if (spec.drift_amplitude > 0.0) {
        j["drift"]["amplitude"] = spec.drift_amplitude;
        j["drift"]["period"] = spec.drift_period;
    }
    j["function"] = function_spec_to(spec.function);
    if (spec.seed) j["seed"] = *spec.seed;
    return j;
}

}  // namespace

EnvSpec env_spec_from_json(const std::string& text) {
    return env_spec_from(nlohmann::json::parse(text));
}

std::string env_spec_to_json(const EnvSpec& spec) { return env_spec_to(spec).dump(2); }

std::unique_ptr<Environment> build_environment(const EnvSpec& spec, std::uint64_t fallback_seed,
                                               std::optional<std::uint64_t> horizon) {
    const std::uint64_t seed = spec.seed.value_or(fallback_seed);

    if (spec.model == "adv_lower_bound") {
        return std::make_unique<AdvLowerBoundEnv>(spec.d, seed);
    }

    HolderFunction g = [&] {
        if (spec.function.kind == "table") return HolderFunction::table(spec.function.table);
        auto peaks = spec.function.peaks;
        if (spec.function.random_peak) {
            Rng peak_rng = Rng::substream(seed, 0x7065616b);  // dedicated stream
            std::vector<double> peak(static_cast<std::size_t>(spec.k));
            for (auto& x : peak) x = 0.05 + 0.9 * peak_rng.next_double();
            peaks = {std::move(peak)};
        } else if (peaks.empty()) {
            peaks = {std::vector<double>(static_cast<std::size_t>(spec.k), 0.5)};
        }
        auto values = spec.function.peak_values;
        if (values.empty()) values.assign(peaks.size(), 1.0);
        return HolderFunction::multi_peak(spec.k, spec.alpha, std::move(peaks),
                                          std::move(values));
    }();

    std::vector<int> tuple = spec.tuple;
    if (tuple.empty()) {
        tuple.resize(static_cast<std::size_t>(spec.k));
        for (int j = 0; j < spec.k; ++j) tuple[static_cast<std::size_t>(j)] = j;
    }

    if (spec.model == "stochastic") {
        if (spec.random_coordinate) {
            return std::make_unique<StochasticEnv>(StochasticEnv::random_coordinate(
                spec.d, std::move(g), spec.zeta, spec.coordinate_probs, seed));
        }
        return std::make_unique<StochasticEnv>(spec.d, std::move(g), spec.zeta,
                                               std::move(tuple), seed);
    }

    if (!horizon) {
        throw std::invalid_argument("adversarial environments need a horizon");
    }
    if (spec.model == "adversarial") {
        if (spec.drift_amplitude > 0.0) {
            return std::make_unique<AdversarialEnv>(AdversarialEnv::drifting_peak(
                spec.d, spec.k, spec.alpha, std::move(tuple), spec.drift_amplitude,
                spec.drift_period, *horizon, seed));
        }
        return std::make_unique<AdversarialEnv>(
            AdversarialEnv::fixed(spec.d, std::move(g), std::move(tuple), *horizon, seed));
    }
    if (spec.model == "shard_switching") {
        if (!spec.shard_s) throw std::invalid_argument("shard_switching needs shard.S");
        return std::make_unique<AdversarialEnv>(AdversarialEnv::shard_switching(
            spec.d, std::move(g), *spec.shard_s, *horizon, spec.shard_seed.value_or(seed)));
    }
    throw std::invalid_argument("unknown environment model: " + spec.model);
}

}  // namespace cabsim
