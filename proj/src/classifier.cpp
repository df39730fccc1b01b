#include "crab/classifier.hpp"

#include <cmath>

#include "crab/error.hpp"
#include "crab/rng.hpp"

namespace crab {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

LogisticOvr::LogisticOvr(int num_labels, std::size_t feature_dim,
                         const LogisticConfig& config)
    : k_(num_labels), dim_(feature_dim), cfg_(config) {
    if (k_ < 1) throw DomainError("classifier needs at least one label");
    Rng rng(derive_seed(cfg_.seed, "logistic-init"));
    w_.assign(k_, std::vector<double>(dim_, 0.0));
    b_.assign(k_, 0.0);
    for (int l = 0; l < k_; ++l) {
        for (std::size_t d = 0; d < dim_; ++d) w_[l][d] = 0.01 * rng.normal();
        b_[l] = 0.01 * rng.normal();
    }
}

void LogisticOvr::fit(const std::vector<const SparseVec*>& features,
                      const SignMatrix& labels) {
    const std::size_t n = features.size();
    if (n == 0) throw TrainingError("cannot fit on an empty training set");
    if (labels.size() != n) throw DimensionError("feature/label row counts differ");
    for (const auto& row : labels)
        if (row.size() != static_cast<std::size_t>(k_))
            throw DimensionError("label width does not match classifier label space");
    for (const SparseVec* f : features)
        for (const auto& [idx, val] : f->entries)
            if (!std::isfinite(val)) throw TrainingError("non-finite feature value");

    const std::size_t batch = cfg_.batch > 0 ? static_cast<std::size_t>(cfg_.batch) : n;
    Rng order_rng(derive_seed(cfg_.seed, "logistic-order"));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::vector<double> grad_w(dim_);
    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
        order_rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(start + batch, n);
            const double inv = 1.0 / static_cast<double>(stop - start);
            for (int l = 0; l < k_; ++l) {
                std::fill(grad_w.begin(), grad_w.end(), 0.0);
                double grad_b = 0.0;
                for (std::size_t t = start; t < stop; ++t) {
                    const SparseVec& x = *features[order[t]];
                    const double y01 = labels[order[t]][l] > 0 ? 1.0 : 0.0;
                    const double err = sigmoid(x.dot(w_[l]) + b_[l]) - y01;
                    for (const auto& [idx, val] : x.entries) grad_w[idx] += err * val;
                    grad_b += err;
                }
                for (std::size_t d = 0; d < dim_; ++d)
                    w_[l][d] -= cfg_.lr * (grad_w[d] * inv + cfg_.l2 * w_[l][d]);
                b_[l] -= cfg_.lr * grad_b * inv;
            }
        }
    }
}

ProbVector LogisticOvr::predict_proba(const SparseVec& features) const {
    ProbVector p(k_);
    for (int l = 0; l < k_; ++l) p[l] = sigmoid(features.dot(w_[l]) + b_[l]);
    return p;
}

double LogisticOvr::loss(const std::vector<const SparseVec*>& features,
                         const SignMatrix& labels) const {
    const std::size_t n = features.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (int l = 0; l < k_; ++l) {
            const double z = features[i]->dot(w_[l]) + b_[l];
            const double y01 = labels[i][l] > 0 ? 1.0 : 0.0;
            // -[y ln p + (1-y) ln(1-p)] written against the logit for stability
            total += std::max(z, 0.0) - y01 * z + std::log1p(std::exp(-std::fabs(z)));
        }
    }
    total /= static_cast<double>(n);
    double reg = 0.0;
    for (int l = 0; l < k_; ++l)
        for (double w : w_[l]) reg += w * w;
    return total + 0.5 * cfg_.l2 * reg;
}

void LogisticOvr::gradient(const std::vector<const SparseVec*>& features,
                           const SignMatrix& labels, int label,
                           std::vector<double>& grad_w, double& grad_b) const {
    const std::size_t n = features.size();
    grad_w.assign(dim_, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const SparseVec& x = *features[i];
        const double y01 = labels[i][label] > 0 ? 1.0 : 0.0;
        const double err = sigmoid(x.dot(w_[label]) + b_[label]) - y01;
        for (const auto& [idx, val] : x.entries) grad_w[idx] += err * val;
        grad_b += err;
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t d = 0; d < dim_; ++d)
        grad_w[d] = grad_w[d] * inv + cfg_.l2 * w_[label][d];
    grad_b *= inv;
}

std::unique_ptr<LogisticOvr> fit_logistic(const std::vector<const SparseVec*>& features,
                                          const SignMatrix& labels, std::size_t feature_dim,
                                          const LogisticConfig& config) {
    if (labels.empty()) throw TrainingError("cannot fit on an empty training set");
    auto model = std::make_unique<LogisticOvr>(static_cast<int>(labels[0].size()),
                                               feature_dim, config);
    model->fit(features, labels);
    return model;
}

} // namespace crab
