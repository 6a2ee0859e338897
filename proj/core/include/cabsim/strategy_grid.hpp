#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cabsim/partition.hpp"

namespace cabsim {

using Point = std::vector<double>;  // d coordinates, each in [0,1]

// One strategy of P_M: a partition of the family plus one grid coefficient
// per block. Coordinate i of the materialized point takes the value
// alphas[block_of(i)] / M; grid values are {1/M, ..., 1}.
struct StrategyId {
    std::size_t partition_index = 0;
    std::vector<int> alphas;  // k entries, each in {1..M}

    bool operator==(const StrategyId&) const = default;
};

inline constexpr std::uint64_t kDefaultArmCap = 1'000'000;

class StrategyGrid {
public:
    StrategyGrid(PartitionFamily family, int resolution);

    const PartitionFamily& family() const { return family_; }
    int resolution() const { return m_; }

    // M^k * |family|, overflow-checked (throws std::overflow_error).
    std::uint64_t num_strategies() const { return num_strategies_; }

    Point materialize(const StrategyId& id) const;

    // Strategy matching the targets on the tuple coordinates to within 1/M
    // per coordinate, using the first separating partition. Throws
    // NoSeparatingPartition when the family fails for this tuple.
    StrategyId project(std::span<const int> tuple, std::span<const double> targets) const;

    // Stable bijection between [0, num_strategies) and StrategyId, in
    // lexicographic order: partition_index major, alphas minor.
    StrategyId id_from_arm(std::uint64_t arm) const;
    std::uint64_t arm_from_id(const StrategyId& id) const;

    // All ids in arm order; throws ArmCapExceeded above the cap.
    std::vector<StrategyId> enumerate_ids(std::uint64_t arm_cap = kDefaultArmCap) const;

private:
    PartitionFamily family_;
    int m_;
    std::uint64_t num_strategies_;
};

}  // namespace cabsim
