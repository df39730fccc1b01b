#ifndef CRAB_CLASSIFIER_HPP
#define CRAB_CLASSIFIER_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "crab/dataset.hpp"

namespace crab {

// Probabilistic multi-label classifier. Implementations must return finite
// per-label probabilities in [0,1]; anything probabilistic can be slotted in
// without touching the acquisition code.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual void fit(const std::vector<const SparseVec*>& features,
                     const SignMatrix& labels) = 0;

    virtual ProbVector predict_proba(const SparseVec& features) const = 0;

    virtual int num_labels() const = 0;
};

struct LogisticConfig {
    double lr = 0.1;
    int epochs = 60;
    double l2 = 1e-4;
    int batch = 32;
    std::uint64_t seed = 0;
};

// One-vs-rest logistic regression trained by mini-batch gradient descent on
// the logistic loss with an L2 penalty on the weights. Sign labels are mapped
// to {0,1} internally. Weight init is small random noise drawn from the seed,
// so epochs=0 leaves the random-init model untouched.
class LogisticOvr : public Classifier {
public:
    LogisticOvr(int num_labels, std::size_t feature_dim, const LogisticConfig& config);

    void fit(const std::vector<const SparseVec*>& features,
             const SignMatrix& labels) override;
    ProbVector predict_proba(const SparseVec& features) const override;
    int num_labels() const override { return k_; }

    // Regularized mean logistic loss of the current weights; used by training
    // diagnostics and the gradient checks.
    double loss(const std::vector<const SparseVec*>& features,
                const SignMatrix& labels) const;

    std::vector<double>& weights(int label) { return w_[label]; }
    double& bias(int label) { return b_[label]; }

    // Mean data gradient plus L2 term for a single label head, evaluated at
    // the current weights. Exposed for finite-difference verification.
    void gradient(const std::vector<const SparseVec*>& features, const SignMatrix& labels,
                  int label, std::vector<double>& grad_w, double& grad_b) const;

private:
    int k_;
    std::size_t dim_;
    LogisticConfig cfg_;
    std::vector<std::vector<double>> w_; // [label][feature]
    std::vector<double> b_;
};

double sigmoid(double z);

std::unique_ptr<LogisticOvr> fit_logistic(const std::vector<const SparseVec*>& features,
                                          const SignMatrix& labels, std::size_t feature_dim,
                                          const LogisticConfig& config);

} // namespace crab

#endif
