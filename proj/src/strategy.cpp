#include "crab/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "crab/error.hpp"
#include "crab/kmeans.hpp"
#include "crab/rng.hpp"

namespace crab {

namespace {

// Keeps scores finite when a saturated member drives a predictive probability
// to an exact 0 or 1 under loss families that diverge there.
constexpr double kProbEps = 1e-12;

double clamp_prob(double p) {
    if (p < kProbEps) return kProbEps;
    if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
    return p;
}

} // namespace

DecayKind decay_from_name(const std::string& name) {
    if (name == "polynomial") return DecayKind::Polynomial;
    if (name == "linear") return DecayKind::Linear;
    if (name == "cosine") return DecayKind::Cosine;
    throw ConfigError("unknown decay kind '" + name +
                      "' (expected polynomial, linear or cosine)");
}

const char* decay_name(DecayKind kind) {
    switch (kind) {
        case DecayKind::Polynomial: return "polynomial";
        case DecayKind::Linear: return "linear";
        case DecayKind::Cosine: return "cosine";
    }
    return "?";
}

std::size_t decay_size(int hard_initial, int t, int total, DecayKind kind, double power) {
    if (hard_initial < 0) throw ConfigError("hard-to-learn size must be >= 0");
    if (!(power > 0.0)) throw ConfigError("decay power must be > 0");
    if (t < 0) throw ConfigError("iteration must be >= 0");
    if (t == 0) return static_cast<std::size_t>(hard_initial);
    if (t >= total) return 0; // covers total == 0 as well

    const double frac = static_cast<double>(t) / static_cast<double>(total);
    double scale = 0.0;
    switch (kind) {
        case DecayKind::Polynomial: scale = std::pow(1.0 - frac, power); break;
        case DecayKind::Linear: scale = 1.0 - frac; break;
        case DecayKind::Cosine: scale = 0.5 * (1.0 + std::cos(3.141592653589793 * frac)); break;
    }
    const long long v = std::llround(static_cast<double>(hard_initial) * scale);
    return static_cast<std::size_t>(std::max(0LL, v));
}

SignMatrix refine_pseudo_labels(const SignMatrix& pseudo,
                                const std::vector<std::pair<int, int>>& asym_pairs) {
    SignMatrix refined = pseudo;
    for (const auto& [m, n] : asym_pairs)
        for (auto& row : refined)
            if (row[m] > 0 && row[n] > 0) row[n] = -1;
    return refined;
}

std::vector<std::size_t> sample_label_wise(const std::vector<std::size_t>& unlabeled,
                                           const SignMatrix& refined_pseudo, int per_label,
                                           std::uint64_t seed) {
    if (refined_pseudo.size() != unlabeled.size())
        throw DimensionError("pseudo-label rows do not cover the unlabeled pool");
    std::vector<std::size_t> out;
    if (per_label <= 0 || unlabeled.empty()) return out;

    const std::size_t k = refined_pseudo[0].size();
    Rng rng(seed);
    std::unordered_set<std::size_t> seen;
    std::vector<std::size_t> eligible;
    for (std::size_t label = 0; label < k; ++label) {
        eligible.clear();
        for (std::size_t i = 0; i < unlabeled.size(); ++i)
            if (refined_pseudo[i][label] > 0) eligible.push_back(i);
        if (eligible.empty()) continue;
        for (std::size_t pick :
             rng.sample_without_replacement(eligible.size(),
                                            static_cast<std::size_t>(per_label))) {
            const std::size_t idx = unlabeled[eligible[pick]];
            if (seen.insert(idx).second) out.push_back(idx);
        }
    }
    return out;
}

std::vector<std::size_t> sample_negative_conflicts(
    const std::vector<std::size_t>& unlabeled, const SignMatrix& pseudo,
    const std::vector<std::pair<int, int>>& exclusive, std::size_t cap,
    std::uint64_t seed) {
    if (pseudo.size() != unlabeled.size())
        throw DimensionError("pseudo-label rows do not cover the unlabeled pool");
    std::vector<std::size_t> conflicted;
    if (exclusive.empty()) return conflicted;

    for (std::size_t i = 0; i < unlabeled.size(); ++i) {
        for (const auto& [m, n] : exclusive) {
            if (pseudo[i][m] > 0 && pseudo[i][n] > 0) {
                conflicted.push_back(unlabeled[i]);
                break;
            }
        }
    }
    if (cap > 0 && conflicted.size() > cap) {
        Rng rng(seed);
        auto picks = rng.sample_without_replacement(conflicted.size(), cap);
        std::vector<std::size_t> sub;
        sub.reserve(cap);
        for (std::size_t p : picks) sub.push_back(conflicted[p]);
        return sub;
    }
    return conflicted;
}

std::vector<std::size_t> sample_hard(const std::vector<std::size_t>& unlabeled,
                                     const SignMatrix& pseudo, std::size_t target,
                                     std::uint64_t seed) {
    if (pseudo.size() != unlabeled.size())
        throw DimensionError("pseudo-label rows do not cover the unlabeled pool");
    std::vector<std::size_t> out;
    if (target == 0) return out;

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < unlabeled.size(); ++i) {
        bool any_positive = false;
        for (auto v : pseudo[i])
            if (v > 0) {
                any_positive = true;
                break;
            }
        if (!any_positive) eligible.push_back(i);
    }
    if (eligible.size() <= target) {
        for (std::size_t i : eligible) out.push_back(unlabeled[i]);
        return out;
    }
    Rng rng(seed);
    for (std::size_t p : rng.sample_without_replacement(eligible.size(), target))
        out.push_back(unlabeled[eligible[p]]);
    return out;
}

RefinedPool build_refined_pool(const std::vector<std::size_t>& unlabeled,
                               const SignMatrix& pseudo, const CorrelationMatrices& matrices,
                               const PairPolicy& pair_policy, const QueryBudget& budget,
                               int iteration, std::uint64_t seed) {
    const auto asym = asymmetric_pairs(matrices.positive(), pair_policy);
    const auto excl = exclusive_pairs(matrices.negative(), pair_policy);
    const SignMatrix refined = refine_pseudo_labels(pseudo, asym);

    const auto label_wise = sample_label_wise(unlabeled, refined, budget.per_label,
                                              derive_seed(seed, "label-wise", iteration));
    const std::size_t cap = static_cast<std::size_t>(std::max(0, budget.per_label)) *
                            static_cast<std::size_t>(matrices.num_labels());
    const auto conflicts = sample_negative_conflicts(
        unlabeled, pseudo, excl, cap, derive_seed(seed, "neg-conflict", iteration));
    const std::size_t hard_target =
        decay_size(budget.hard_initial, std::min(iteration, budget.iterations),
                   budget.iterations, budget.decay, budget.decay_power);
    const auto hard =
        sample_hard(unlabeled, pseudo, hard_target, derive_seed(seed, "hard", iteration));

    RefinedPool pool;
    std::unordered_set<std::size_t> seen;
    auto absorb = [&](const std::vector<std::size_t>& picks, Provenance tag) {
        for (std::size_t idx : picks) {
            if (seen.insert(idx).second) {
                pool.indices.push_back(idx);
                pool.provenance.push_back(tag);
            }
        }
    };
    absorb(label_wise, Provenance::LabelWise);
    absorb(conflicts, Provenance::NegativeConflict);
    absorb(hard, Provenance::Hard);

    if (pool.indices.empty()) {
        pool.used_fallback = true;
        pool.indices = unlabeled;
        pool.provenance.assign(unlabeled.size(), Provenance::Fallback);
    }
    return pool;
}

IncrementScorer::IncrementScorer(const Ensemble& ens, std::vector<const SparseVec*> anchors,
                                 AttentionMatrix att, BetaParams params, bool joint_labels)
    : ens_(ens), anchors_(std::move(anchors)), params_(params), joint_(joint_labels) {
    if (anchors_.empty()) throw ConfigError("anchor set is empty");
    if (ens_.members.empty()) throw TrainingError("ensemble has no members");
    const int k = ens_.num_labels();
    if (att.size() != static_cast<std::size_t>(k))
        throw DimensionError("attention matrix size does not match label space");
    if (joint_ && k > 10)
        throw ConfigError("joint label enumeration supports at most 10 labels");

    att_colsums_ = att.column_sums();

    anchor_probs_.reserve(anchors_.size());
    anchor_pseudo_.reserve(anchors_.size());
    before_.reserve(anchors_.size());
    for (const SparseVec* a : anchors_) {
        std::vector<ProbVector> probs;
        probs.reserve(ens_.size());
        for (const auto& member : ens_.members) probs.push_back(member->predict_proba(*a));

        ProbVector mean(k, 0.0);
        for (std::size_t e = 0; e < probs.size(); ++e)
            for (int l = 0; l < k; ++l) mean[l] += ens_.weights[e] * probs[e][l];
        for (int l = 0; l < k; ++l) mean[l] = clamp_prob(mean[l]);

        anchor_pseudo_.push_back(pseudo_label_row(mean));
        before_.push_back(
            ab_score_with_colsums(mean, anchor_pseudo_.back(), att_colsums_, params_));
        anchor_probs_.push_back(std::move(probs));
    }
}

std::vector<double> IncrementScorer::score(const SparseVec& candidate) const {
    std::vector<ProbVector> cand_probs;
    cand_probs.reserve(ens_.size());
    for (const auto& member : ens_.members)
        cand_probs.push_back(member->predict_proba(candidate));
    return score_from_probs(cand_probs);
}

std::vector<double> IncrementScorer::score_from_probs(
    const std::vector<ProbVector>& cand_probs) const {
    const int k = ens_.num_labels();
    const std::size_t e_count = ens_.size();
    std::vector<double> inc(anchors_.size(), 0.0);

    // Shared inner loop: predictive at each anchor under the reweighted
    // posterior, scored against the anchor's pseudo label.
    ProbVector after(k);
    auto accumulate = [&](const std::vector<double>& weights, double hypothesis_weight) {
        for (std::size_t a = 0; a < anchors_.size(); ++a) {
            for (int l = 0; l < k; ++l) {
                double p = 0.0;
                for (std::size_t e = 0; e < e_count; ++e)
                    p += weights[e] * anchor_probs_[a][e][l];
                after[l] = clamp_prob(p);
            }
            const double s_after =
                ab_score_with_colsums(after, anchor_pseudo_[a], att_colsums_, params_);
            inc[a] += hypothesis_weight * (s_after - before_[a]);
        }
    };

    if (joint_) {
        // Exact expectation over every joint label vector; the hypothesis
        // weight is the ensemble-mixture likelihood of the vector.
        SignRow y(k);
        const std::uint32_t combos = 1u << k;
        for (std::uint32_t mask = 0; mask < combos; ++mask) {
            for (int l = 0; l < k; ++l) y[l] = (mask >> l) & 1u ? 1 : -1;
            double weight = 0.0;
            for (std::size_t e = 0; e < e_count; ++e) {
                double lik = 1.0;
                for (int l = 0; l < k; ++l)
                    lik *= y[l] > 0 ? cand_probs[e][l] : 1.0 - cand_probs[e][l];
                weight += ens_.weights[e] * lik;
            }
            if (weight <= 0.0) continue;
            accumulate(reweight_from_probs(cand_probs, ens_.weights, y), weight);
        }
    } else {
        // Per-label factorization: each label toggled independently, weighted
        // by its marginal posterior predictive.
        for (int l = 0; l < k; ++l) {
            double marginal = 0.0;
            for (std::size_t e = 0; e < e_count; ++e)
                marginal += ens_.weights[e] * cand_probs[e][l];
            for (int sign = 0; sign < 2; ++sign) {
                const bool positive = sign == 0;
                const double weight = positive ? marginal : 1.0 - marginal;
                if (weight <= 0.0) continue;
                accumulate(reweight_single_label(cand_probs, ens_.weights, l, positive),
                           weight);
            }
        }
    }

    for (double v : inc)
        if (!std::isfinite(v)) throw Error("non-finite expected score increment");
    return inc;
}

std::vector<double> expected_score_increment(const Ensemble& ens, const SparseVec& x,
                                             const std::vector<const SparseVec*>& anchors,
                                             const AttentionMatrix& att,
                                             const BetaParams& params, bool joint_labels) {
    IncrementScorer scorer(ens, anchors, att, params, joint_labels);
    return scorer.score(x);
}

std::vector<std::size_t> select_batch(const std::vector<ScoreVector>& vectors, std::size_t n,
                                      std::uint64_t seed) {
    if (vectors.empty()) throw DomainError("select_batch needs at least one score vector");
    if (n == 0) return {};

    // Candidates in ascending index order so tie-breaks are reproducible.
    std::vector<std::size_t> order(vectors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return vectors[a].candidate < vectors[b].candidate;
    });

    std::vector<std::size_t> all;
    all.reserve(order.size());
    for (std::size_t i : order) all.push_back(vectors[i].candidate);
    if (n >= vectors.size()) return all;

    std::vector<std::vector<double>> points;
    points.reserve(order.size());
    for (std::size_t i : order) points.push_back(vectors[i].increments);

    std::set<std::vector<double>> distinct(points.begin(), points.end());
    const std::size_t k = std::min(n, distinct.size());

    const KMeansResult km = kmeans_cluster(points, k, seed);

    std::vector<std::size_t> chosen;
    std::unordered_set<std::size_t> taken;
    for (const auto& center : km.centers) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_pos = 0;
        for (std::size_t p = 0; p < points.size(); ++p) {
            const double d = squared_distance(points[p], center);
            if (d < best) { // strict: ties keep the lowest candidate index
                best = d;
                best_pos = p;
            }
        }
        if (taken.insert(best_pos).second) chosen.push_back(all[best_pos]);
    }
    // Top up to exactly n with the lowest-index unchosen candidates.
    for (std::size_t p = 0; p < points.size() && chosen.size() < n; ++p)
        if (taken.insert(p).second) chosen.push_back(all[p]);
    return chosen;
}

std::vector<const SparseVec*> gather_features(const MultiLabelDataset& ds,
                                              const std::vector<std::size_t>& indices) {
    std::vector<const SparseVec*> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(&ds.instances[i].features);
    return out;
}

SignMatrix gather_labels(const MultiLabelDataset& ds,
                         const std::vector<std::size_t>& indices) {
    SignMatrix out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(ds.instances[i].labels);
    return out;
}

QueryResult query_batch(const Ensemble& ens, const PoolState& pool,
                        const MultiLabelDataset& ds, const CorrelationMatrices* matrices,
                        const StrategyConfig& cfg, std::uint64_t seed, int iteration) {
    if ((cfg.attention || cfg.refinement) && matrices == nullptr)
        throw ConfigError("attention/refinement require correlation matrices");

    QueryResult result;
    const auto& unlabeled = pool.unlabeled;
    if (unlabeled.empty()) return result;

    const int k = ds.num_labels;
    const auto feats_u = gather_features(ds, unlabeled);
    const SignMatrix pseudo = pseudo_labels(ens, feats_u);

    if (cfg.refinement) {
        result.refined = build_refined_pool(unlabeled, pseudo, *matrices, cfg.pair_policy,
                                            cfg.budget, iteration, seed);
    } else if (cfg.pool_subsample > 0 && cfg.pool_subsample < unlabeled.size()) {
        Rng rng(derive_seed(seed, "pool-subsample", iteration));
        for (std::size_t p :
             rng.sample_without_replacement(unlabeled.size(), cfg.pool_subsample))
            result.refined.indices.push_back(unlabeled[p]);
        result.refined.provenance.assign(result.refined.indices.size(),
                                         Provenance::Fallback);
    } else {
        result.refined.indices = unlabeled;
        result.refined.provenance.assign(unlabeled.size(), Provenance::Fallback);
    }

    std::vector<std::size_t> candidates = result.refined.indices;
    std::sort(candidates.begin(), candidates.end());

    // Common anchor set: a seed-deterministic permutation of the unlabeled
    // pool. A candidate occurring among the anchors swaps that slot for the
    // first reserve entry, so every candidate sees the same anchor count.
    const std::size_t anchor_len =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(1, cfg.anchors)),
                              unlabeled.size() - 1);
    if (anchor_len == 0)
        throw ConfigError("anchor set is empty (unlabeled pool has a single instance)");

    std::vector<std::size_t> perm(unlabeled.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    Rng anchor_rng(derive_seed(seed, "anchors", iteration));
    anchor_rng.shuffle(perm);

    std::vector<std::size_t> base_idx;
    base_idx.reserve(anchor_len);
    for (std::size_t i = 0; i < anchor_len; ++i) base_idx.push_back(unlabeled[perm[i]]);
    const std::size_t reserve_idx = unlabeled[perm[anchor_len]];

    const AttentionMatrix att =
        cfg.attention ? attention_matrix(matrices->positive(), cfg.gamma)
                      : AttentionMatrix::identity(static_cast<std::size_t>(k), cfg.gamma);

    const IncrementScorer shared(ens, gather_features(ds, base_idx), att, cfg.params,
                                 cfg.joint_labels);
    result.anchor_count = shared.anchor_count();

    std::unordered_map<std::size_t, std::size_t> base_slot;
    for (std::size_t i = 0; i < base_idx.size(); ++i) base_slot.emplace(base_idx[i], i);

    std::vector<ScoreVector> vectors;
    vectors.reserve(candidates.size());
    for (std::size_t cand : candidates) {
        const SparseVec& x = ds.instances[cand].features;
        auto slot = base_slot.find(cand);
        if (slot == base_slot.end()) {
            vectors.push_back({cand, shared.score(x)});
        } else {
            std::vector<std::size_t> swapped = base_idx;
            swapped[slot->second] = reserve_idx;
            const IncrementScorer local(ens, gather_features(ds, swapped), att, cfg.params,
                                        cfg.joint_labels);
            vectors.push_back({cand, local.score(x)});
        }
    }

    result.selected =
        select_batch(vectors, static_cast<std::size_t>(std::max(0, cfg.budget.batch)),
                     derive_seed(seed, "kmeans", iteration));
    return result;
}

PoolState crab_iteration(const PoolState& pool, const MultiLabelDataset& ds,
                         CorrelationMatrices& matrices, const StrategyConfig& cfg,
                         std::uint64_t seed) {
    if (pool.labeled.empty()) throw TrainingError("labeled pool is empty");

    const Ensemble ens = train_ensemble(
        gather_features(ds, pool.labeled), gather_labels(ds, pool.labeled), ds.feature_dim,
        cfg.ensemble_size, cfg.classifier,
        derive_seed(seed, "ensemble", static_cast<std::uint64_t>(pool.iteration)));

    // Fold labeled rows acquired since the last update into the counts.
    const auto seen = static_cast<std::size_t>(matrices.rows_seen());
    if (pool.labeled.size() > seen) {
        std::vector<std::size_t> fresh(pool.labeled.begin() + seen, pool.labeled.end());
        matrices.update(gather_labels(ds, fresh));
    }

    const QueryResult result =
        query_batch(ens, pool, ds, &matrices, cfg, seed, pool.iteration);

    PoolState next = pool;
    annotate(next, result.selected);
    next.iteration = pool.iteration + 1;
    return next;
}

std::vector<std::size_t> random_query(const PoolState& pool, std::size_t n,
                                      std::uint64_t seed) {
    if (n >= pool.unlabeled.size()) return pool.unlabeled;
    Rng rng(seed);
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t p : rng.sample_without_replacement(pool.unlabeled.size(), n))
        out.push_back(pool.unlabeled[p]);
    return out;
}

std::vector<std::size_t> besra_style_query(const Ensemble& ens, const PoolState& pool,
                                           const MultiLabelDataset& ds,
                                           const StrategyConfig& cfg, std::uint64_t seed,
                                           int iteration) {
    StrategyConfig plain = cfg;
    plain.attention = false;
    plain.refinement = false;
    return query_batch(ens, pool, ds, nullptr, plain, seed, iteration).selected;
}

} // namespace crab
