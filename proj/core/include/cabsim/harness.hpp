#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cabsim/cab.hpp"
#include "cabsim/environments.hpp"

namespace cabsim {

// One sweep cell blueprint: algorithm config + environment + round count.
struct RunSpec {
    CabConfig cab;
    EnvSpec env;
    std::uint64_t rounds = 1;
};

// Full experiment description as read from a config file.
struct HarnessConfig {
    CabConfig cab;
    EnvSpec env;
};

HarnessConfig config_from_json(const std::string& text);
std::string config_to_json(const HarnessConfig& config);  // canonical form

// FNV-1a hash of the canonical config JSON, as 16 hex digits.
std::string config_fingerprint(const HarnessConfig& config);

// Executes one cell: derives the algorithm seed and (unless pinned in the
// spec) the environment seed from `seed`, builds the environment with the
// requested horizon, and runs the CAB loop.
RegretTrace run_cell(const RunSpec& spec, std::uint64_t seed);

struct CellResult {
    std::size_t config_index = 0;
    std::uint64_t seed = 0;
    std::optional<RegretTrace> trace;
    std::string error;  // structured record for failed cells

    bool ok() const { return trace.has_value(); }
};

// One result per (config, seed) in canonical order, independent of the
// parallelism level. Failed cells carry their error instead of aborting
// the sweep.
std::vector<CellResult> run_sweep(std::span<const RunSpec> configs,
                                  std::span<const std::uint64_t> seeds, int parallelism);

struct SlopeFit {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> mean_regret;  // across traces, at each checkpoint
    double slope = 0.0;               // OLS on (ln n, ln mean regret)
    double intercept = 0.0;
    double residual = 0.0;            // RMS residual of the fit
    double theory_exponent = 0.0;     // (alpha + k) / (2 alpha + k)
};

double theory_exponent(double alpha, int k);

// OLS on given sample points; throws DegenerateFit on non-positive values
// and requires at least 4 checkpoints.
SlopeFit fit_slope_points(std::span<const std::uint64_t> ns, std::span<const double> regrets,
                          double theory);

// Mean cumulative regret across traces at the checkpoints, then OLS.
SlopeFit fit_slope(std::span<const RegretTrace> traces,
                   std::span<const std::uint64_t> checkpoints, double alpha, int k);

struct LowerBoundReport {
    double mean_per_round_regret = 0.0;
    double margin_over_half = 0.0;  // mean - 0.5
    std::uint64_t rounds = 0;
    std::size_t num_traces = 0;
};

// Mean per-round regret of diagonal-restricted traces against the
// T/2 lower-bound line.
LowerBoundReport compare_lower_bound(std::span<const RegretTrace> traces);

// Per-round CSV with header t,epoch_T,M,arm,reward,inst_regret,cum_regret.
// Doubles use shortest round-trip formatting, so emit/parse is exact.
std::string trace_to_csv(const RegretTrace& trace);
RegretTrace trace_from_csv(const std::string& text);

// Sweep summary {config, seeds, checkpoints, mean_regret[], slope,
// theory_exponent, ...}; one object per config.
std::string sweep_summary_json(const HarnessConfig& config,
                               std::span<const std::uint64_t> seeds,
                               std::span<const CellResult> results,
                               std::span<const std::uint64_t> checkpoints);

// Default checkpoint grid: powers of two 2^10..2^17, clipped to n.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t n);

}  // namespace cabsim
