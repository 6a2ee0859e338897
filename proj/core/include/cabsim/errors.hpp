#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cabsim {

// Exhaustive verification requested above the configured tuple cap.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The family fails the partition assumption for a queried tuple.
struct NoSeparatingPartition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grid too large for the configured arm cap; carries the offending epoch.
struct ArmCapExceeded : std::runtime_error {
    std::uint64_t epoch_start;  // T at which the schedule produced the grid; 0 outside run_cab
    std::uint64_t resolution;   // M
    std::uint64_t strategies;

    ArmCapExceeded(std::uint64_t T, std::uint64_t M, std::uint64_t K, std::uint64_t cap)
        : std::runtime_error("arm cap exceeded: " + std::to_string(K) + " strategies > cap " +
                             std::to_string(cap) + " (epoch T=" + std::to_string(T) +
                             ", M=" + std::to_string(M) + ")"),
          epoch_start(T),
          resolution(M),
          strategies(K) {}
};

// Query past the pre-generated horizon of an adversarial environment.
struct HorizonExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric optimum oracle only supports k <= 3.
struct OracleUnsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Log-log fit impossible (non-positive mean regret at a checkpoint).
struct DegenerateFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cabsim
