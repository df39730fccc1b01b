#ifndef CRAB_ENSEMBLE_HPP
#define CRAB_ENSEMBLE_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "crab/classifier.hpp"
#include "crab/dataset.hpp"

namespace crab {

// E independently trained classifiers with a posterior weight per member.
// Members are immutable once trained; weight vectors produced by reweighting
// are per-candidate scratch values, the ensemble itself is never mutated by
// scoring.
struct Ensemble {
    std::vector<std::shared_ptr<const Classifier>> members;
    std::vector<double> weights; // sums to 1

    std::size_t size() const { return members.size(); }
    int num_labels() const { return members.empty() ? 0 : members[0]->num_labels(); }
};

// Cold-start training: E fresh members, each from its own seed-derived random
// initialization, all trained on the full current labeled pool; weights start
// uniform.
Ensemble train_ensemble(const std::vector<const SparseVec*>& features,
                        const SignMatrix& labels, std::size_t feature_dim, int ensemble_size,
                        const LogisticConfig& classifier_config, std::uint64_t seed);

// Weighted member average of per-label probabilities at x.
ProbVector posterior_predictive(const Ensemble& ens, const SparseVec& x);

// Same, with explicit weights (the post-reweighting predictive).
ProbVector predictive_after(const Ensemble& ens, const std::vector<double>& weights,
                            const SparseVec& x);

// Sign row: +1 where the averaged probability strictly exceeds 0.5.
SignRow pseudo_label_row(const ProbVector& averaged);
SignMatrix pseudo_labels(const Ensemble& ens, const std::vector<const SparseVec*>& xs);

// Bayesian reweighting of the member weights given hypothetical evidence
// (x, y). Per-member likelihood is the product of per-label Bernoulli terms;
// an all-zero likelihood falls back to the prior weights.
std::vector<double> reweight_posterior(const Ensemble& ens, const SparseVec& x,
                                       const SignRow& y);

// Reweighting from cached member probabilities at x (hot-loop variant).
// member_probs[e] holds member e's per-label probabilities at the candidate.
std::vector<double> reweight_from_probs(const std::vector<ProbVector>& member_probs,
                                        const std::vector<double>& prior,
                                        const SignRow& y);

// Single-label evidence variant: reweights on (y^label = sign) alone.
std::vector<double> reweight_single_label(const std::vector<ProbVector>& member_probs,
                                          const std::vector<double>& prior, int label,
                                          bool positive);

} // namespace crab

#endif
