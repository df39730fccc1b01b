#ifndef CRAB_STRATEGY_HPP
#define CRAB_STRATEGY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "crab/correlation.hpp"
#include "crab/dataset.hpp"
#include "crab/ensemble.hpp"
#include "crab/pool.hpp"
#include "crab/scoring.hpp"

namespace crab {

enum class DecayKind { Polynomial, Linear, Cosine };

DecayKind decay_from_name(const std::string& name);
const char* decay_name(DecayKind kind);

// Per-iteration query sizing. batch is the acquisition size N, per_label the
// label-wise candidate size, hard_initial the iteration-0 hard-to-learn size
// that the decay schedule shrinks over the campaign.
struct QueryBudget {
    int batch = 20;
    int per_label = 50;
    int hard_initial = 300;
    int iterations = 10;
    DecayKind decay = DecayKind::Polynomial;
    double decay_power = 2.0;
};

// Hard-to-learn sample count at iteration t of total. Exact at the ends:
// hard_initial at t=0, zero at t=total; non-increasing in between for all
// three schedules.
std::size_t decay_size(int hard_initial, int t, int total, DecayKind kind, double power);

enum class Provenance { LabelWise, NegativeConflict, Hard, Fallback };

// Candidate subset of the unlabeled pool fed to the scorer. Duplicates across
// the three samplers are collapsed, first provenance wins.
struct RefinedPool {
    std::vector<std::size_t> indices; // dataset indices
    std::vector<Provenance> provenance;
    bool used_fallback = false;
};

// Drop the dependent label n from rows where an asymmetric pair (m,n) is
// jointly positive, so sampling prioritizes the independent label m. Applied
// in pair-list order; only ever turns +1 into -1.
SignMatrix refine_pseudo_labels(const SignMatrix& pseudo,
                                const std::vector<std::pair<int, int>>& asym_pairs);

// Per label, up to per_label uniform draws among instances whose refined
// pseudo row is positive there; the per-label draws are unioned.
std::vector<std::size_t> sample_label_wise(const std::vector<std::size_t>& unlabeled,
                                           const SignMatrix& refined_pseudo, int per_label,
                                           std::uint64_t seed);

// Instances whose pseudo row asserts both members of any exclusive pair;
// uniformly subsampled to cap when larger.
std::vector<std::size_t> sample_negative_conflicts(
    const std::vector<std::size_t>& unlabeled, const SignMatrix& pseudo,
    const std::vector<std::pair<int, int>>& exclusive, std::size_t cap, std::uint64_t seed);

// Up to target uniform draws among instances with an all-negative pseudo row.
std::vector<std::size_t> sample_hard(const std::vector<std::size_t>& unlabeled,
                                     const SignMatrix& pseudo, std::size_t target,
                                     std::uint64_t seed);

RefinedPool build_refined_pool(const std::vector<std::size_t>& unlabeled,
                               const SignMatrix& pseudo, const CorrelationMatrices& matrices,
                               const PairPolicy& pair_policy, const QueryBudget& budget,
                               int iteration, std::uint64_t seed);

// Expected-increment vector of one candidate over a fixed anchor set. Entry a
// is the expectation over the candidate's hypothetical label of the change in
// the anchors' correlation-aware score after Bayesian reweighting, scored
// against the anchor's pseudo label. Returned un-aggregated for clustering.
struct ScoreVector {
    std::size_t candidate = 0; // dataset index
    std::vector<double> increments;
};

// Precomputes anchor-side state once so candidate scoring stays cheap.
class IncrementScorer {
public:
    // joint_labels switches the expectation from the per-label factorization
    // to exact enumeration of all joint label vectors (label spaces up to 10).
    IncrementScorer(const Ensemble& ens, std::vector<const SparseVec*> anchors,
                    AttentionMatrix att, BetaParams params, bool joint_labels = false);

    std::vector<double> score(const SparseVec& candidate) const;

    std::size_t anchor_count() const { return anchors_.size(); }

private:
    std::vector<double> score_from_probs(const std::vector<ProbVector>& cand_probs) const;

    const Ensemble& ens_;
    std::vector<const SparseVec*> anchors_;
    std::vector<std::vector<ProbVector>> anchor_probs_; // [anchor][member]
    SignMatrix anchor_pseudo_;
    std::vector<double> before_;      // attention score at prior weights
    std::vector<double> att_colsums_;
    BetaParams params_;
    bool joint_;
};

std::vector<double> expected_score_increment(const Ensemble& ens, const SparseVec& x,
                                             const std::vector<const SparseVec*>& anchors,
                                             const AttentionMatrix& att,
                                             const BetaParams& params,
                                             bool joint_labels = false);

// k-means-center batch selection over the increment vectors: k shrinks to the
// distinct-vector count, each center maps to its nearest candidate (ties to
// the lowest dataset index), leftover slots fill with the lowest unchosen
// indices so exactly min(n, |vectors|) candidates come back.
std::vector<std::size_t> select_batch(const std::vector<ScoreVector>& vectors, std::size_t n,
                                      std::uint64_t seed);

// Full strategy configuration shared by the CRAB loop and the baselines.
struct StrategyConfig {
    QueryBudget budget;
    BetaParams params{0.1, 3.0};
    double gamma = 2.0;
    PairPolicy pair_policy;
    int anchors = 64;
    bool attention = true;
    bool refinement = true;
    bool joint_labels = false;
    std::size_t pool_subsample = 0; // refinement off: candidate cap, 0 = whole pool
    int ensemble_size = 5;
    LogisticConfig classifier;
};

struct QueryResult {
    std::vector<std::size_t> selected; // dataset indices, |selected| = min(N, |U*|)
    RefinedPool refined;
    std::size_t anchor_count = 0;
};

// One acquisition pass with an already trained ensemble. matrices may be null
// when both attention and refinement are off (the BESRA-style configuration).
QueryResult query_batch(const Ensemble& ens, const PoolState& pool,
                        const MultiLabelDataset& ds, const CorrelationMatrices* matrices,
                        const StrategyConfig& cfg, std::uint64_t seed, int iteration);

// One full CRAB iteration: cold-start ensemble training, correlation update
// from the labeled pool, pseudo labels, pool refinement, increment scoring,
// k-means batch selection and annotation. Advances pool.iteration.
PoolState crab_iteration(const PoolState& pool, const MultiLabelDataset& ds,
                         CorrelationMatrices& matrices, const StrategyConfig& cfg,
                         std::uint64_t seed);

// Uniform seed-deterministic draw of n indices from the unlabeled pool.
std::vector<std::size_t> random_query(const PoolState& pool, std::size_t n,
                                      std::uint64_t seed);

// The CRAB pipeline with identity attention, no pool refinement and no
// correlation matrices.
std::vector<std::size_t> besra_style_query(const Ensemble& ens, const PoolState& pool,
                                           const MultiLabelDataset& ds,
                                           const StrategyConfig& cfg, std::uint64_t seed,
                                           int iteration);

// Gathers feature pointers for a set of dataset indices.
std::vector<const SparseVec*> gather_features(const MultiLabelDataset& ds,
                                              const std::vector<std::size_t>& indices);
SignMatrix gather_labels(const MultiLabelDataset& ds,
                         const std::vector<std::size_t>& indices);

} // namespace crab

#endif
