#include "cabsim/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cabsim/errors.hpp"

namespace cabsim {

namespace {

void check_dims(int d, int k) {
    if (k < 1 || k > d) {
        throw std::invalid_argument("require d >= k >= 1, got d=" + std::to_string(d) +
                                    " k=" + std::to_string(k));
    }
}

// Validates size-k tuple of distinct indices in [0, d).
void check_tuple(std::span<const int> tuple, int d, int k) {
    if (static_cast<int>(tuple.size()) != k) {
        throw std::invalid_argument("tuple must have exactly k=" + std::to_string(k) +
                                    " entries");
    }
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] < 0 || tuple[i] >= d) {
            throw std::invalid_argument("tuple index out of range: " + std::to_string(tuple[i]));
        }
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
            if (tuple[i] == tuple[j]) {
                throw std::invalid_argument("tuple indices must be distinct");
            }
        }
    }
}

}  // namespace

Partition::Partition(int d, int k, std::vector<int> labels) : d_(d), k_(k), labels_(std::move(labels)) {
    check_dims(d, k);
    if (static_cast<int>(labels_.size()) != d) {
        throw std::invalid_argument("labels size must equal d");
    }
    for (int l : labels_) {
        if (l < 0 || l >= k) throw std::invalid_argument("block label out of range");
    }
}

Partition Partition::from_blocks(int d, const std::vector<std::vector<int>>& blocks) {
    const int k = static_cast<int>(blocks.size());
    check_dims(d, k);
    std::vector<int> labels(static_cast<std::size_t>(d), -1);
    for (int j = 0; j < k; ++j) {
        for (int idx : blocks[static_cast<std::size_t>(j)]) {
            if (idx < 0 || idx >= d) throw std::invalid_argument("block index out of range");
            if (labels[static_cast<std::size_t>(idx)] != -1) {
                throw std::invalid_argument("blocks are not disjoint");
            }
            labels[static_cast<std::size_t>(idx)] = j;
        }
    }
    for (int l : labels) {
        if (l == -1) throw std::invalid_argument("blocks do not cover {0..d-1}");
    }
    return Partition(d, k, std::move(labels));
}

int Partition::block_of(int index) const {
    if (index < 0 || index >= d_) throw std::out_of_range("index out of range");
    return labels_[static_cast<std::size_t>(index)];
}

std::vector<std::vector<int>> Partition::blocks() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(k_));
    for (int i = 0; i < d_; ++i) {
        out[static_cast<std::size_t>(labels_[static_cast<std::size_t>(i)])].push_back(i);
    }
    return out;
}

bool separates(const Partition& partition, std::span<const int> tuple) {
    check_tuple(tuple, partition.dim(), partition.num_blocks());
    // k entries over k blocks: separated <=> no two entries share a block.
    std::vector<char> hit(static_cast<std::size_t>(partition.num_blocks()), 0);
    for (int idx : tuple) {
        char& h = hit[static_cast<std::size_t>(partition.block_of(idx))];
        if (h) return false;
        h = 1;
    }
    return true;
}

Partition random_partition(int d, int k, Rng& rng) {
    check_dims(d, k);
    std::vector<int> labels(static_cast<std::size_t>(d));
    for (auto& l : labels) {
        l = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    }
    return Partition(d, k, std::move(labels));
}

std::size_t min_family_size(int d, int k) {
    check_dims(d, k);
    const double m = 2.0 * k * std::exp(static_cast<double>(k)) * std::log(static_cast<double>(d));
    const double c = std::ceil(m);
    return c < 1.0 ? 1 : static_cast<std::size_t>(c);
}

PartitionFamily build_random_family(int d, int k, std::optional<std::size_t> m,
                                    std::uint64_t seed) {
    check_dims(d, k);
    const std::size_t count = m.value_or(min_family_size(d, k));
    PartitionFamily family{d, k, seed, {}};
    family.partitions.reserve(count);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        family.partitions.push_back(random_partition(d, k, rng));
    }
    return family;
}

std::optional<std::size_t> find_separating(const PartitionFamily& family,
                                           std::span<const int> tuple) {
    check_tuple(tuple, family.d, family.k);
    for (std::size_t i = 0; i < family.partitions.size(); ++i) {
        if (separates(family.partitions[i], tuple)) return i;
    }
    return std::nullopt;
}

std::uint64_t binomial_clamped(int d, int k, std::uint64_t cap) {
    // C(d,k) by the multiplicative formula, clamped at cap+1.
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        const double next = static_cast<double>(result) * (d - k + i) / i;
        if (next > static_cast<double>(cap)) return cap + 1;
        result = result * static_cast<std::uint64_t>(d - k + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

// Partial Fisher-Yates: each entry uniform among the remaining indices.
std::vector<int> random_distinct_tuple(int d, int k, Rng& rng) {
    check_dims(d, k);
    std::vector<int> pool(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<int> tuple(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const auto pick = static_cast<std::size_t>(j) +
                          rng.below(static_cast<std::uint64_t>(d - j));
        std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
        tuple[static_cast<std::size_t>(j)] = pool[static_cast<std::size_t>(j)];
    }
    return tuple;
}

VerificationReport verify_partition_assumption(const PartitionFamily& family,
                                               const VerificationBudget& budget) {
    VerificationReport report;
    report.mode = budget.mode;

    if (budget.mode == VerificationBudget::Mode::Exhaustive) {
        const std::uint64_t total = binomial_clamped(family.d, family.k, budget.exhaustive_cap);
        if (total > budget.exhaustive_cap) {
            throw BudgetExceeded("exhaustive verification needs C(d,k) > cap=" +
                                 std::to_string(budget.exhaustive_cap) + " tuples");
        }
        // Ascending combinations; separation is permutation-invariant.
        std::vector<int> tuple(static_cast<std::size_t>(family.k));
        for (int j = 0; j < family.k; ++j) tuple[static_cast<std::size_t>(j)] = j;
        for (;;) {
            ++report.tuples_checked;
            if (!find_separating(family, tuple)) report.failures.push_back(tuple);
            // next combination
            int j = family.k - 1;
            while (j >= 0 && tuple[static_cast<std::size_t>(j)] == family.d - family.k + j) --j;
            if (j < 0) break;
            ++tuple[static_cast<std::size_t>(j)];
            for (int l = j + 1; l < family.k; ++l) {
                tuple[static_cast<std::size_t>(l)] = tuple[static_cast<std::size_t>(l - 1)] + 1;
            }
        }
    } else {
        Rng rng(budget.seed);
        for (std::uint64_t i = 0; i < budget.num_tuples; ++i) {
            const auto tuple = random_distinct_tuple(family.d, family.k, rng);
            ++report.tuples_checked;
            if (!find_separating(family, tuple)) report.failures.push_back(tuple);
        }
    }
    report.satisfied = report.failures.empty();
    return report;
}

std::string family_to_json(const PartitionFamily& family) {
    nlohmann::json doc;
    doc["d"] = family.d;
    doc["k"] = family.k;
    doc["seed"] = family.seed;
    auto& parts = doc["partitions"] = nlohmann::json::array();
    for (const auto& p : family.partitions) parts.push_back(p.blocks());
    return doc.dump(2) + "\n";
}

PartitionFamily family_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    PartitionFamily family;
    family.d = doc.at("d").get<int>();
    family.k = doc.at("k").get<int>();
    family.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& blocks : doc.at("partitions")) {
        family.partitions.push_back(
            Partition::from_blocks(family.d, blocks.get<std::vector<std::vector<int>>>()));
    }
    for (const auto& p : family.partitions) {
        if (p.num_blocks() != family.k) {
            throw std::invalid_argument("family document mixes partitions of different k");
        }
    }
    return family;
}

}  // namespace cabsim
