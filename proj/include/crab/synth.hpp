#ifndef CRAB_SYNTH_HPP
#define CRAB_SYNTH_HPP

#include <cstdint>

#include "crab/config.hpp"
#include "crab/dataset.hpp"

namespace crab {

// Latent-factor generator: labels attach to factors, instances activate a
// random factor subset, and labels fire at a boosted rate under an active
// factor. Base rates fall geometrically from max_rate to max_rate/imbalance,
// features are noisy sums of per-label prototypes.
MultiLabelDataset generate_base(const SyntheticGenConfig& cfg);

// Greedy instance removal driving the dataset's MeanIR into
// [target - tolerance, target + tolerance]. Deterministic under seed; throws
// TargetError with the closest achieved value when the target is unreachable.
MultiLabelDataset subsample_to_mean_ir(const MultiLabelDataset& base, double target,
                                       double tolerance, std::uint64_t seed);

// Generative path plus optional imbalance targeting (target_mean_ir > 0).
MultiLabelDataset generate_synthetic(const SyntheticGenConfig& cfg);

} // namespace crab

#endif
