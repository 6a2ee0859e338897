#include "cabsim/strategy_grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cabsim/errors.hpp"

namespace cabsim {

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) {
        throw std::overflow_error("strategy count overflows 64 bits");
    }
    return a * b;
}

}  // namespace

StrategyGrid::StrategyGrid(PartitionFamily family, int resolution)
    : family_(std::move(family)), m_(resolution) {
    if (m_ < 1) throw std::invalid_argument("grid resolution M must be >= 1");
    if (family_.partitions.empty()) throw std::invalid_argument("family must be non-empty");
    std::uint64_t s = 1;
    for (int j = 0; j < family_.k; ++j) s = mul_checked(s, static_cast<std::uint64_t>(m_));
    num_strategies_ = mul_checked(s, family_.partitions.size());
}

Point StrategyGrid::materialize(const StrategyId& id) const {
    if (id.partition_index >= family_.partitions.size()) {
        throw std::out_of_range("partition index out of range");
    }
    if (static_cast<int>(id.alphas.size()) != family_.k) {
        throw std::invalid_argument("alphas must have exactly k entries");
    }
    for (int a : id.alphas) {
        if (a < 1 || a > m_) throw std::out_of_range("alpha out of {1..M}");
    }
    const Partition& partition = family_.partitions[id.partition_index];
    Point coords(static_cast<std::size_t>(family_.d));
    for (int i = 0; i < family_.d; ++i) {
        const int block = partition.block_of(i);
        coords[static_cast<std::size_t>(i)] =
            static_cast<double>(id.alphas[static_cast<std::size_t>(block)]) / m_;
    }
    return coords;
}

StrategyId StrategyGrid::project(std::span<const int> tuple,
                                 std::span<const double> targets) const {
    if (targets.size() != tuple.size()) {
        throw std::invalid_argument("one target per tuple index required");
    }
    for (double t : targets) {
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("targets must lie in [0,1]");
    }
    const auto sep = find_separating(family_, tuple);
    if (!sep) {
        throw NoSeparatingPartition("no partition separates the queried tuple");
    }
    const Partition& partition = family_.partitions[*sep];
    StrategyId id;
    id.partition_index = *sep;
    id.alphas.assign(static_cast<std::size_t>(family_.k), 1);
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        // nearest grid value, ties away from zero, clamped to {1..M}
        int alpha = static_cast<int>(std::round(targets[j] * m_));
        alpha = std::max(1, std::min(m_, alpha));
        id.alphas[static_cast<std::size_t>(partition.block_of(tuple[j]))] = alpha;
    }
    return id;
}

StrategyId StrategyGrid::id_from_arm(std::uint64_t arm) const {
    if (arm >= num_strategies_) throw std::out_of_range("arm index out of range");
    std::uint64_t per_partition = 1;
    for (int j = 0; j < family_.k; ++j) per_partition *= static_cast<std::uint64_t>(m_);
    StrategyId id;
    id.partition_index = static_cast<std::size_t>(arm / per_partition);
    std::uint64_t rest = arm % per_partition;
    id.alphas.assign(static_cast<std::size_t>(family_.k), 1);
    for (int j = family_.k - 1; j >= 0; --j) {
        id.alphas[static_cast<std::size_t>(j)] = static_cast<int>(rest % m_) + 1;
        rest /= static_cast<std::uint64_t>(m_);
    }
    return id;
}

std::uint64_t StrategyGrid::arm_from_id(const StrategyId& id) const {
    if (id.partition_index >= family_.partitions.size() ||
        static_cast<int>(id.alphas.size()) != family_.k) {
        throw std::invalid_argument("id does not belong to this grid");
    }
    std::uint64_t arm = id.partition_index;
    for (int j = 0; j < family_.k; ++j) {
        const int a = id.alphas[static_cast<std::size_t>(j)];
        if (a < 1 || a > m_) throw std::out_of_range("alpha out of {1..M}");
        arm = arm * static_cast<std::uint64_t>(m_) + static_cast<std::uint64_t>(a - 1);
    }
    return arm;
}

std::vector<StrategyId> StrategyGrid::enumerate_ids(std::uint64_t arm_cap) const {
    if (num_strategies_ > arm_cap) {
        throw ArmCapExceeded(0, static_cast<std::uint64_t>(m_), num_strategies_, arm_cap);
    }
    std::vector<StrategyId> ids;
    ids.reserve(static_cast<std::size_t>(num_strategies_));
    for (std::uint64_t arm = 0; arm < num_strategies_; ++arm) {
        ids.push_back(id_from_arm(arm));
    }
    return ids;
}

}  // namespace cabsim
