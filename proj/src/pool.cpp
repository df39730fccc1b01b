#include "crab/pool.hpp"

#include <algorithm>
#include <unordered_set>

#include "crab/error.hpp"
#include "crab/rng.hpp"

namespace crab {

bool PoolState::is_unlabeled(std::size_t idx) const {
    return std::find(unlabeled.begin(), unlabeled.end(), idx) != unlabeled.end();
}

PoolState split_pools(const MultiLabelDataset& ds, std::size_t init_labeled,
                      std::size_t validation, std::uint64_t seed) {
    const std::size_t n = ds.size();
    if (init_labeled + validation > n)
        throw ConfigError("init_labeled + validation (" +
                          std::to_string(init_labeled + validation) +
                          ") exceeds dataset size " + std::to_string(n));

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    PoolState pool;
    pool.labeled.assign(order.begin(), order.begin() + init_labeled);
    pool.validation.assign(order.begin() + init_labeled,
                           order.begin() + init_labeled + validation);
    pool.unlabeled.assign(order.begin() + init_labeled + validation, order.end());
    return pool;
}

void annotate(PoolState& pool, const std::vector<std::size_t>& indices) {
    if (indices.empty()) return;

    std::unordered_set<std::size_t> moving(indices.begin(), indices.end());
    if (moving.size() != indices.size())
        throw InvalidQueryError("duplicate indices in annotation batch");

    for (std::size_t idx : indices)
        if (!pool.is_unlabeled(idx))
            throw InvalidQueryError("index " + std::to_string(idx) +
                                    " is not in the unlabeled pool");

    pool.unlabeled.erase(std::remove_if(pool.unlabeled.begin(), pool.unlabeled.end(),
                                        [&](std::size_t i) { return moving.count(i) > 0; }),
                         pool.unlabeled.end());
    pool.labeled.insert(pool.labeled.end(), indices.begin(), indices.end());
}

} // namespace crab
