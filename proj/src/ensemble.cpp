#include "crab/ensemble.hpp"

#include "crab/error.hpp"
#include "crab/rng.hpp"

namespace crab {

Ensemble train_ensemble(const std::vector<const SparseVec*>& features,
                        const SignMatrix& labels, std::size_t feature_dim, int ensemble_size,
                        const LogisticConfig& classifier_config, std::uint64_t seed) {
    if (labels.empty()) throw TrainingError("labeled pool is empty");
    if (ensemble_size < 1) throw ConfigError("ensemble size must be >= 1");

    Ensemble ens;
    ens.members.reserve(ensemble_size);
    for (int e = 0; e < ensemble_size; ++e) {
        LogisticConfig member_cfg = classifier_config;
        member_cfg.seed = derive_seed(seed, "ensemble-member", static_cast<std::uint64_t>(e));
        ens.members.push_back(fit_logistic(features, labels, feature_dim, member_cfg));
    }
    ens.weights.assign(ensemble_size, 1.0 / static_cast<double>(ensemble_size));
    return ens;
}

ProbVector posterior_predictive(const Ensemble& ens, const SparseVec& x) {
    return predictive_after(ens, ens.weights, x);
}

ProbVector predictive_after(const Ensemble& ens, const std::vector<double>& weights,
                            const SparseVec& x) {
    if (ens.members.empty()) throw TrainingError("ensemble has no members");
    if (weights.size() != ens.members.size())
        throw DimensionError("weight vector length does not match ensemble size");

    ProbVector avg(ens.num_labels(), 0.0);
    for (std::size_t e = 0; e < ens.members.size(); ++e) {
        const ProbVector p = ens.members[e]->predict_proba(x);
        for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += weights[e] * p[k];
    }
    return avg;
}

SignRow pseudo_label_row(const ProbVector& averaged) {
    SignRow row(averaged.size());
    for (std::size_t k = 0; k < averaged.size(); ++k)
        row[k] = averaged[k] > 0.5 ? 1 : -1; // strict: a tie at 0.5 is negative
    return row;
}

SignMatrix pseudo_labels(const Ensemble& ens, const std::vector<const SparseVec*>& xs) {
    SignMatrix out;
    out.reserve(xs.size());
    for (const SparseVec* x : xs) out.push_back(pseudo_label_row(posterior_predictive(ens, *x)));
    return out;
}

std::vector<double> reweight_from_probs(const std::vector<ProbVector>& member_probs,
                                        const std::vector<double>& prior,
                                        const SignRow& y) {
    const std::size_t e_count = member_probs.size();
    std::vector<double> w(e_count);
    double total = 0.0;
    for (std::size_t e = 0; e < e_count; ++e) {
        if (member_probs[e].size() != y.size())
            throw DimensionError("member probability width does not match label vector");
        double lik = 1.0;
        for (std::size_t k = 0; k < y.size(); ++k)
            lik *= y[k] > 0 ? member_probs[e][k] : 1.0 - member_probs[e][k];
        w[e] = prior[e] * lik;
        total += w[e];
    }
    if (total <= 0.0) return prior; // saturated members left no mass
    for (double& v : w) v /= total;
    return w;
}

std::vector<double> reweight_single_label(const std::vector<ProbVector>& member_probs,
                                          const std::vector<double>& prior, int label,
                                          bool positive) {
    const std::size_t e_count = member_probs.size();
    std::vector<double> w(e_count);
    double total = 0.0;
    for (std::size_t e = 0; e < e_count; ++e) {
        const double p = member_probs[e][label];
        w[e] = prior[e] * (positive ? p : 1.0 - p);
        total += w[e];
    }
    if (total <= 0.0) return prior;
    for (double& v : w) v /= total;
    return w;
}

std::vector<double> reweight_posterior(const Ensemble& ens, const SparseVec& x,
                                       const SignRow& y) {
    if (ens.members.empty()) throw TrainingError("ensemble has no members");
    if (y.size() != static_cast<std::size_t>(ens.num_labels()))
        throw DimensionError("hypothetical label width does not match label space");

    std::vector<ProbVector> probs;
    probs.reserve(ens.members.size());
    for (const auto& member : ens.members) probs.push_back(member->predict_proba(x));
    return reweight_from_probs(probs, ens.weights, y);
}

} // namespace crab
