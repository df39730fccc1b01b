#ifndef CRAB_POOL_HPP
#define CRAB_POOL_HPP

#include <cstdint>
#include <vector>

#include "crab/dataset.hpp"

namespace crab {

// Mutable state of one active-learning run. labeled/unlabeled/validation are
// pairwise disjoint index sets into the dataset; annotate only ever moves
// indices unlabeled -> labeled. Single-threaded owner.
struct PoolState {
    std::vector<std::size_t> labeled;     // in annotation order
    std::vector<std::size_t> unlabeled;
    std::vector<std::size_t> validation;
    int iteration = 0;

    bool is_unlabeled(std::size_t idx) const;
};

// Uniform random disjoint split, deterministic under seed; everything not
// drawn into labeled/validation becomes unlabeled.
PoolState split_pools(const MultiLabelDataset& ds, std::size_t init_labeled,
                      std::size_t validation, std::uint64_t seed);

// Move the given indices from unlabeled to labeled, revealing their labels.
// Throws InvalidQueryError if any index is not currently unlabeled.
void annotate(PoolState& pool, const std::vector<std::size_t>& indices);

} // namespace crab

#endif
