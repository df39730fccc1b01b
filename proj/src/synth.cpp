#include "crab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "crab/error.hpp"
#include "crab/metrics.hpp"
#include "crab/rng.hpp"

namespace crab {

MultiLabelDataset generate_base(const SyntheticGenConfig& cfg) {
    if (cfg.labels < 2) throw ConfigError("synthetic label space must have K >= 2");
    if (cfg.instances < 2) throw ConfigError("synthetic dataset needs at least 2 instances");
    if (!(cfg.max_rate > 0.0 && cfg.max_rate < 1.0))
        throw ConfigError("synth.max_rate must lie in (0,1)");
    if (!(cfg.imbalance >= 1.0)) throw ConfigError("synth.imbalance must be >= 1");
    const int factors = std::max(1, cfg.factors);

    Rng rng(derive_seed(cfg.seed, "synth-base"));
    const int k = cfg.labels;
    const std::size_t dim = cfg.feature_dim;

    // Geometric base rates from max_rate down to max_rate / imbalance.
    std::vector<double> rate(k);
    for (int l = 0; l < k; ++l) {
        const double frac = k > 1 ? static_cast<double>(l) / static_cast<double>(k - 1) : 0.0;
        rate[l] = cfg.max_rate * std::pow(1.0 / cfg.imbalance, frac);
    }

    // Active/inactive firing rates per label; expectation matches rate[l]
    // under factor activity 0.5, boosting co-occurrence within one factor.
    const double factor_activity = 0.5;
    const double lift = 1.8;
    std::vector<double> rate_on(k), rate_off(k);
    for (int l = 0; l < k; ++l) {
        rate_on[l] = std::min(lift * rate[l], 0.95);
        rate_off[l] = std::max(
            (rate[l] - factor_activity * rate_on[l]) / (1.0 - factor_activity), 0.0);
    }

    // Per-label feature prototypes.
    std::vector<std::vector<double>> proto(k, std::vector<double>(dim, 0.0));
    for (int l = 0; l < k; ++l) {
        double norm2 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            proto[l][d] = rng.normal();
            norm2 += proto[l][d] * proto[l][d];
        }
        const double inv = 1.0 / std::sqrt(std::max(norm2, 1e-12));
        for (std::size_t d = 0; d < dim; ++d) proto[l][d] *= 2.0 * inv;
    }

    MultiLabelDataset ds;
    ds.num_labels = k;
    ds.feature_dim = dim;
    ds.instances.reserve(cfg.instances);

    std::vector<double> dense(dim);
    for (std::size_t i = 0; i < cfg.instances; ++i) {
        Instance inst;
        inst.labels.assign(k, -1);

        std::vector<bool> active(factors);
        for (int f = 0; f < factors; ++f) active[f] = rng.uniform() < factor_activity;
        for (int l = 0; l < k; ++l) {
            const double p = active[l % factors] ? rate_on[l] : rate_off[l];
            if (rng.uniform() < p) inst.labels[l] = 1;
        }

        std::fill(dense.begin(), dense.end(), 0.0);
        for (int l = 0; l < k; ++l)
            if (inst.labels[l] > 0)
                for (std::size_t d = 0; d < dim; ++d) dense[d] += proto[l][d];
        for (std::size_t d = 0; d < dim; ++d) dense[d] += cfg.noise * rng.normal();

        inst.features.entries.reserve(dim);
        for (std::size_t d = 0; d < dim; ++d)
            inst.features.entries.emplace_back(static_cast<std::uint32_t>(d), dense[d]);
        ds.instances.push_back(std::move(inst));
    }

    // The invariant requires at least one positive label somewhere.
    bool any = false;
    for (const auto& inst : ds.instances)
        for (auto v : inst.labels)
            if (v > 0) any = true;
    if (!any) ds.instances[0].labels[0] = 1;

    validate_dataset(ds);
    return ds;
}

namespace {

double mean_ir_from_counts(const std::vector<long long>& counts) {
    long long max_count = 0;
    for (long long c : counts) max_count = std::max(max_count, c);
    if (max_count == 0) return 1.0;
    double sum = 0.0;
    std::size_t kept = 0;
    for (long long c : counts) {
        if (c == 0) continue;
        sum += static_cast<double>(max_count) / static_cast<double>(c);
        ++kept;
    }
    return sum / static_cast<double>(kept);
}

} // namespace

MultiLabelDataset subsample_to_mean_ir(const MultiLabelDataset& base, double target,
                                       double tolerance, std::uint64_t seed) {
    if (!(target >= 1.0)) throw ConfigError("target MeanIR must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("MeanIR tolerance must be > 0");

    const int k = base.num_labels;
    std::vector<std::size_t> kept(base.size());
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;

    std::vector<long long> counts(k, 0);
    for (const auto& inst : base.instances)
        for (int l = 0; l < k; ++l)
            if (inst.labels[l] > 0) ++counts[l];

    auto build = [&](const std::vector<std::size_t>& indices) {
        MultiLabelDataset out;
        out.num_labels = base.num_labels;
        out.feature_dim = base.feature_dim;
        out.instances.reserve(indices.size());
        for (std::size_t i : indices) out.instances.push_back(base.instances[i]);
        return out;
    };

    double current = mean_ir_from_counts(counts);
    double best_gap = std::fabs(current - target);
    double best_ir = current;
    std::vector<std::size_t> best = kept;

    Rng rng(derive_seed(seed, "synth-subsample"));
    const std::size_t floor_size =
        std::max<std::size_t>(static_cast<std::size_t>(2 * k), 20);
    std::vector<long long> trial(k);

    while (kept.size() > floor_size) {
        if (std::fabs(current - target) <= tolerance) return build(kept);

        // Evaluate a random candidate pool of removals; take the one landing
        // closest to the target without silencing any label entirely.
        const std::size_t pool =
            std::min<std::size_t>(kept.size(), 128);
        auto picks = rng.sample_without_replacement(kept.size(), pool);

        double cand_best_gap = std::numeric_limits<double>::infinity();
        std::size_t cand_pos = kept.size();
        double cand_ir = current;
        for (std::size_t p : picks) {
            const auto& labels = base.instances[kept[p]].labels;
            bool kills_label = false;
            trial = counts;
            for (int l = 0; l < k; ++l) {
                if (labels[l] > 0) {
                    if (--trial[l] == 0) kills_label = true;
                }
            }
            if (kills_label) continue;
            const double after = mean_ir_from_counts(trial);
            const double gap = std::fabs(after - target);
            if (gap < cand_best_gap) {
                cand_best_gap = gap;
                cand_pos = p;
                cand_ir = after;
            }
        }
        if (cand_pos == kept.size()) break; // every removal would kill a label

        const auto& labels = base.instances[kept[cand_pos]].labels;
        for (int l = 0; l < k; ++l)
            if (labels[l] > 0) --counts[l];
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(cand_pos));
        current = cand_ir;

        if (std::fabs(current - target) < best_gap) {
            best_gap = std::fabs(current - target);
            best_ir = current;
            best = kept;
        }
    }

    if (std::fabs(current - target) <= tolerance) return build(kept);
    if (best_gap <= tolerance) return build(best);
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "cannot reach MeanIR %.4g +- %.4g; closest achieved %.4g", target,
                  tolerance, best_ir);
    throw TargetError(msg, best_ir);
}

MultiLabelDataset generate_synthetic(const SyntheticGenConfig& cfg) {
    MultiLabelDataset ds = generate_base(cfg);
    if (cfg.target_mean_ir > 0.0)
        ds = subsample_to_mean_ir(ds, cfg.target_mean_ir, cfg.tolerance,
                                  derive_seed(cfg.seed, "synth-target"));
    return ds;
}

} // namespace crab
