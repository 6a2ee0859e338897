#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cabsim/rng.hpp"

namespace cabsim {

// Partition of {0..d-1} into exactly k ordered blocks; blocks may be empty.
// Stored as a label vector (labels[i] = block of coordinate i), which keeps
// the disjoint + covering invariants true by construction.
class Partition {
public:
    Partition(int d, int k, std::vector<int> labels);
    static Partition from_blocks(int d, const std::vector<std::vector<int>>& blocks);

    int dim() const { return d_; }
    int num_blocks() const { return k_; }
    int block_of(int index) const;
    std::vector<std::vector<int>> blocks() const;

    bool operator==(const Partition&) const = default;

private:
    int d_;
    int k_;
    std::vector<int> labels_;
};

// true iff each block contains exactly one tuple entry.
// Tuple entries must be distinct, in range, and exactly k of them.
bool separates(const Partition& partition, std::span<const int> tuple);

// Assigns each index to a uniformly random block, independently.
Partition random_partition(int d, int k, Rng& rng);

// ceil(2 k e^k ln d), floored at 1. Families of this size satisfy the
// partition assumption with probability at least 1 - d^{-k}.
std::size_t min_family_size(int d, int k);

struct PartitionFamily {
    int d = 0;
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<Partition> partitions;

    std::size_t size() const { return partitions.size(); }
};

// m independent random partitions, reproducible from seed.
// m defaults to min_family_size(d, k).
PartitionFamily build_random_family(int d, int k, std::optional<std::size_t> m,
                                    std::uint64_t seed);

// Smallest index of a partition separating the tuple; nullopt when the
// family fails the partition assumption for this tuple.
std::optional<std::size_t> find_separating(const PartitionFamily& family,
                                           std::span<const int> tuple);

// Uniform ordered k-tuple of distinct indices over {0..d-1}.
std::vector<int> random_distinct_tuple(int d, int k, Rng& rng);

struct VerificationBudget {
    enum class Mode { Exhaustive, Sampled };

    static VerificationBudget exhaustive(std::uint64_t cap = 1'000'000) {
        return {Mode::Exhaustive, cap, 0, 0};
    }
    static VerificationBudget sampled(std::uint64_t num_tuples, std::uint64_t seed) {
        return {Mode::Sampled, 0, num_tuples, seed};
    }

    Mode mode = Mode::Exhaustive;
    std::uint64_t exhaustive_cap = 1'000'000;
    std::uint64_t num_tuples = 0;
    std::uint64_t seed = 0;
};

struct VerificationReport {
    VerificationBudget::Mode mode = VerificationBudget::Mode::Exhaustive;
    std::uint64_t tuples_checked = 0;
    std::vector<std::vector<int>> failures;  // tuples with no separating partition
    bool satisfied = false;                  // <=> failures.empty()
};

// Exhaustive mode enumerates all C(d,k) tuples (throws BudgetExceeded above
// the cap); sampled mode draws N uniform distinct-index tuples from the seed.
VerificationReport verify_partition_assumption(const PartitionFamily& family,
                                               const VerificationBudget& budget);

// C(d,k) clamped at `cap + 1` to avoid overflow; used for budget checks.
std::uint64_t binomial_clamped(int d, int k, std::uint64_t cap);

// JSON document {d, k, seed, partitions: [[[block indices], ...], ...]}.
std::string family_to_json(const PartitionFamily& family);
PartitionFamily family_from_json(const std::string& text);

}  // namespace cabsim
