#include "cabsim/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "cabsim/errors.hpp"
#include "cabsim/rng.hpp"

namespace cabsim {

namespace {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t x) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[x & 0xF];
        x >>= 4;
    }
    return out;
}

EngineType engine_type_from(const std::string& name) {
    if (name == "ucb1") return EngineType::Ucb1;
    if (name == "exp3") return EngineType::Exp3;
    if (name == "exp3s") return EngineType::Exp3S;
    if (name == "uniform") return EngineType::Uniform;
    throw std::invalid_argument("unknown engine: " + name);
}

std::string engine_name(EngineType type) {
    switch (type) {
        case EngineType::Ucb1: return "ucb1";
        case EngineType::Exp3: return "exp3";
        case EngineType::Exp3S: return "exp3s";
        case EngineType::Uniform: return "uniform";
    }
    return "?";
}

void append_double(std::string& out, double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

}  // namespace

HarnessConfig config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    HarnessConfig config;

    config.env = env_spec_from_json(j.at("environment").dump());

    config.cab.d = j.at("d").get<int>();
    config.cab.k = j.at("k").get<int>();
    config.cab.alpha = j.value("alpha", 1.0);
    config.cab.engine.type = engine_type_from(j.value("engine", std::string("ucb1")));
    config.cab.engine.zeta =
        j.value("zeta", config.env.zeta > 0.0 ? config.env.zeta : 1.0);
    if (j.contains("S") && !j.at("S").is_null()) {
        config.cab.hardness_budget = j.at("S").get<std::uint64_t>();
        config.cab.engine.hardness_budget = config.cab.hardness_budget;
    }
    config.cab.arm_cap = j.value("arm_cap", kDefaultArmCap);
    if (j.contains("horizon") && !j.at("horizon").is_null()) {
        config.cab.horizon = j.at("horizon").get<std::uint64_t>();
    }

    const auto fam = j.at("family");
    if (fam.contains("file")) {
        std::ifstream in(fam.at("file").get<std::string>());
        if (!in) {
            throw std::invalid_argument("cannot open family file: " +
                                        fam.at("file").get<std::string>());
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        config.cab.family = family_from_json(buffer.str());
    } else {
        const auto seed = fam.value("seed", std::uint64_t{0});
        std::optional<std::size_t> m;
        if (fam.contains("m") && !fam.at("m").is_null()) {
            m = fam.at("m").get<std::size_t>();
        }
        config.cab.family = build_random_family(config.cab.d, config.cab.k, m, seed);
    }
    config.cab.validate();
    return config;
}

std::string config_to_json(const HarnessConfig& config) {
    nlohmann::json j;
    j["d"] = config.cab.d;
    j["k"] = config.cab.k;
    j["alpha"] = config.cab.alpha;
    j["engine"] = engine_name(config.cab.engine.type);
    j["zeta"] = config.cab.engine.zeta;
    if (config.cab.hardness_budget) j["S"] = *config.cab.hardness_budget;
    j["arm_cap"] = config.cab.arm_cap;
    if (config.cab.horizon) j["horizon"] = *config.cab.horizon;
    // families are deterministic in (d, k, m, seed); the content hash pins
    // file-loaded families as well
    j["family"]["seed"] = config.cab.family.seed;
    j["family"]["m"] = config.cab.family.size();
    j["family"]["hash"] = to_hex(fnv1a64(family_to_json(config.cab.family)));
    j["environment"] = nlohmann::json::parse(env_spec_to_json(config.env));
    return j.dump(2);
}

std::string config_fingerprint(const HarnessConfig& config) {
    return to_hex(fnv1a64(config_to_json(config)));
}

RegretTrace run_cell(const RunSpec& spec, std::uint64_t seed) {
    const std::uint64_t algo_seed = derive_seed(seed, 0);
    const std::uint64_t env_fallback = derive_seed(seed, 1);
    const auto env = build_environment(spec.env, env_fallback, spec.rounds);
    RegretTrace trace = run_cab(spec.cab, *env, spec.rounds, algo_seed);
    trace.env_seed = spec.env.seed.value_or(env_fallback);
    trace.config_fingerprint = config_fingerprint({spec.cab, spec.env});
    return trace;
}

std::vector<CellResult> run_sweep(std::span<const RunSpec> configs,
                                  std::span<const std::uint64_t> seeds, int parallelism) {
    const std::size_t cells = configs.size() * seeds.size();
    std::vector<CellResult> results(cells);

    auto run_one = [&](std::size_t cell) {
        const std::size_t config_index = cell / seeds.size();
        const std::uint64_t seed = seeds[cell % seeds.size()];
        CellResult& result = results[cell];
        result.config_index = config_index;
        result.seed = seed;
        try {
            result.trace = run_cell(configs[config_index], seed);
        } catch (const std::exception& e) {
            result.error = e.what();
        }
    };

    const int workers = std::max(1, parallelism);
    if (workers == 1 || cells <= 1) {
        for (std::size_t cell = 0; cell < cells; ++cell) run_one(cell);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t cell = next.fetch_add(1);
                if (cell >= cells) return;
                run_one(cell);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

double theory_exponent(double alpha, int k) {
    return (alpha + static_cast<double>(k)) / (2.0 * alpha + static_cast<double>(k));
}

SlopeFit fit_slope_points(std::span<const std::uint64_t> ns, std::span<const double> regrets,
                          double theory) {
    if (ns.size() != regrets.size()) throw std::invalid_argument("mismatched sample arrays");
    if (ns.size() < 4) throw std::invalid_argument("slope fit needs at least 4 checkpoints");
    for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
        if (ns[i] >= ns[i + 1]) throw std::invalid_argument("checkpoints must increase");
    }
    for (double r : regrets) {
        if (!(r > 0.0)) throw DegenerateFit("mean regret must be positive at every checkpoint");
    }

    SlopeFit fit;
    fit.checkpoints.assign(ns.begin(), ns.end());
    fit.mean_regret.assign(regrets.begin(), regrets.end());
    fit.theory_exponent = theory;

    const auto m = static_cast<double>(ns.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        sx += std::log(static_cast<double>(ns[i]));
        sy += std::log(regrets[i]);
    }
    const double xbar = sx / m;
    const double ybar = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double dx = std::log(static_cast<double>(ns[i])) - xbar;
        const double dy = std::log(regrets[i]) - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;

    double ss = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double predicted =
            fit.intercept + fit.slope * std::log(static_cast<double>(ns[i]));
        const double err = std::log(regrets[i]) - predicted;
        ss += err * err;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

SlopeFit fit_slope(std::span<const RegretTrace> traces,
                   std::span<const std::uint64_t> checkpoints, double alpha, int k) {
    if (traces.empty()) throw std::invalid_argument("need at least one trace");
    if (checkpoints.size() < 4) throw std::invalid_argument("slope fit needs >= 4 checkpoints");
    for (const auto& trace : traces) {
        if (trace.rounds < checkpoints.back()) {
            throw std::invalid_argument("traces do not cover the last checkpoint");
        }
    }
    std::vector<double> mean(checkpoints.size(), 0.0);
    for (const auto& trace : traces) {
        double acc = 0.0;
        std::size_t next = 0;
        for (std::uint64_t t = 1; t <= trace.rounds && next < checkpoints.size(); ++t) {
            acc += trace.inst_regret[t - 1];
            if (t == checkpoints[next]) {
                mean[next] += acc;
                ++next;
            }
        }
    }
    for (double& v : mean) v /= static_cast<double>(traces.size());
    return fit_slope_points(checkpoints, mean, theory_exponent(alpha, k));
}

LowerBoundReport compare_lower_bound(std::span<const RegretTrace> traces) {
    if (traces.empty()) throw std::invalid_argument("need at least one trace");
    LowerBoundReport report;
    report.num_traces = traces.size();
    report.rounds = traces.front().rounds;
    double total = 0.0;
    std::uint64_t rounds = 0;
    for (const auto& trace : traces) {
        total += trace.total_regret();
        rounds += trace.rounds;
    }
    report.mean_per_round_regret = total / static_cast<double>(rounds);
    report.margin_over_half = report.mean_per_round_regret - 0.5;
    return report;
}

std::string trace_to_csv(const RegretTrace& trace) {
    std::string out = "t,epoch_T,M,arm,reward,inst_regret,cum_regret\n";
    out.reserve(out.size() + trace.rounds * 48);
    double cum = 0.0;
    std::size_t epoch_index = 0;
    for (std::uint64_t t = 1; t <= trace.rounds; ++t) {
        while (epoch_index + 1 < trace.epochs.size() &&
               t >= trace.epochs[epoch_index + 1].start) {
            ++epoch_index;
        }
        const Epoch& epoch = trace.epochs[epoch_index];
        cum += trace.inst_regret[t - 1];
        out += std::to_string(t);
        out += ',';
        out += std::to_string(epoch.start);
        out += ',';
        out += std::to_string(epoch.resolution);
        out += ',';
        out += std::to_string(trace.arms[t - 1]);
        out += ',';
        append_double(out, trace.rewards[t - 1]);
        out += ',';
        append_double(out, trace.inst_regret[t - 1]);
        out += ',';
        append_double(out, cum);
        out += '\n';
    }
    return out;
}

namespace {

double parse_double(std::string_view field, const char* what) {
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::invalid_argument(std::string("bad CSV field for ") + what);
    }
    return value;
}

std::uint64_t parse_u64(std::string_view field, const char* what) {
    std::uint64_t value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw std::invalid_argument(std::string("bad CSV field for ") + what);
    }
    return value;
}

}  // namespace

RegretTrace trace_from_csv(const std::string& text) {
    RegretTrace trace;
    std::size_t pos = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string_view line(text.data() + pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "t,epoch_T,M,arm,reward,inst_regret,cum_regret") {
                throw std::invalid_argument("unexpected CSV header");
            }
            saw_header = true;
            continue;
        }
        std::array<std::string_view, 7> fields;
        std::size_t start = 0;
        for (int f = 0; f < 7; ++f) {
            const std::size_t comma = f == 6 ? line.size() : line.find(',', start);
            if (comma == std::string_view::npos) {
                throw std::invalid_argument("CSV row with missing fields");
            }
            fields[static_cast<std::size_t>(f)] = line.substr(start, comma - start);
            start = comma + 1;
        }
        const std::uint64_t t = parse_u64(fields[0], "t");
        const std::uint64_t epoch_T = parse_u64(fields[1], "epoch_T");
        const std::uint64_t m = parse_u64(fields[2], "M");
        if (t != trace.rounds + 1) throw std::invalid_argument("CSV rounds must be contiguous");
        ++trace.rounds;
        if (trace.epochs.empty() || trace.epochs.back().start != epoch_T) {
            trace.epochs.push_back({epoch_T, 0, m, 0});
        }
        ++trace.epochs.back().length;
        trace.arms.push_back(static_cast<std::uint32_t>(parse_u64(fields[3], "arm")));
        trace.rewards.push_back(parse_double(fields[4], "reward"));
        trace.inst_regret.push_back(parse_double(fields[5], "inst_regret"));
    }
    if (!saw_header) throw std::invalid_argument("empty CSV document");
    return trace;
}

std::string sweep_summary_json(const HarnessConfig& config,
                               std::span<const std::uint64_t> seeds,
                               std::span<const CellResult> results,
                               std::span<const std::uint64_t> checkpoints) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config_to_json(config));
    j["seeds"] = std::vector<std::uint64_t>(seeds.begin(), seeds.end());
    j["checkpoints"] = std::vector<std::uint64_t>(checkpoints.begin(), checkpoints.end());
    j["theory_exponent"] = theory_exponent(config.cab.alpha, config.cab.k);

    std::vector<RegretTrace> traces;
    for (const auto& result : results) {
        if (result.ok()) {
            traces.push_back(*result.trace);
        } else {
            j["failed_cells"].push_back({{"seed", result.seed}, {"error", result.error}});
        }
    }

    if (!traces.empty()) {
        try {
            const SlopeFit fit = fit_slope(traces, checkpoints, config.cab.alpha, config.cab.k);
            j["mean_regret"] = fit.mean_regret;
            j["slope"] = fit.slope;
            j["intercept"] = fit.intercept;
            j["residual"] = fit.residual;
        } catch (const std::exception& e) {
            j["slope"] = nullptr;
            j["fit_error"] = e.what();
        }
    } else {
        j["slope"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t n) {
    std::vector<std::uint64_t> points;
    for (std::uint64_t p = 1024; p <= (std::uint64_t{1} << 17); p *= 2) {
        if (p <= n) points.push_back(p);
    }
    if (points.size() < 4) {
        points.clear();
        for (std::uint64_t div : {8, 4, 2, 1}) {
            const std::uint64_t p = std::max<std::uint64_t>(1, n / div);
            if (points.empty() || points.back() < p) points.push_back(p);
        }
    }
    return points;
}

}  // namespace cabsim
