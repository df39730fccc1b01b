#include "crab/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "crab/error.hpp"

namespace crab {

CorrelationMatrices::CorrelationMatrices(int num_labels) : k_(num_labels) {
    if (k_ < 1) throw DomainError("correlation matrices need at least one label");
    pos_counts_.assign(k_, std::vector<long long>(k_, 0));
    label_counts_.assign(k_, 0);
    recompute();
}

void CorrelationMatrices::update(const SignMatrix& labels) {
    for (const auto& row : labels)
        if (row.size() != static_cast<std::size_t>(k_))
            throw DimensionError("label row width " + std::to_string(row.size()) +
                                 " does not match label space " + std::to_string(k_));
    for (const auto& row : labels) {
        ++rows_seen_;
        for (int n = 0; n < k_; ++n) {
            if (row[n] <= 0) continue;
            ++label_counts_[n];
            for (int m = 0; m < k_; ++m)
                if (row[m] > 0) ++pos_counts_[m][n];
        }
    }
    recompute();
}

void CorrelationMatrices::recompute() {
    a_.assign(k_, std::vector<double>(k_, 0.0));
    neg_a_.assign(k_, std::vector<double>(k_, 0.0));
    for (int n = 0; n < k_; ++n) {
        a_[n][n] = 1.0;
        const long long denom = label_counts_[n];
        if (denom == 0) continue; // unseen label carries no evidence
        for (int m = 0; m < k_; ++m) {
            if (m == n) continue;
            a_[m][n] = static_cast<double>(pos_counts_[m][n]) / static_cast<double>(denom);
            neg_a_[m][n] = static_cast<double>(denom - pos_counts_[m][n]) /
                           static_cast<double>(denom);
        }
    }
}

CorrelationMatrices build_matrices(const SignMatrix& labels, int num_labels) {
    CorrelationMatrices m(num_labels);
    m.update(labels);
    return m;
}

namespace {

// Mean and population std of the off-diagonal entries.
std::pair<double, double> off_diag_stats(const std::vector<std::vector<double>>& m) {
    const std::size_t k = m.size();
    if (k < 2) return {0.0, 0.0};
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j) {
                sum += m[i][j];
                ++count;
            }
    const double mean = sum / static_cast<double>(count);
    double var = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j) var += (m[i][j] - mean) * (m[i][j] - mean);
    return {mean, std::sqrt(var / static_cast<double>(count))};
}

} // namespace

PairThresholds asymmetric_threshold(const std::vector<std::vector<double>>& a,
                                    const PairPolicy& policy) {
    auto [mean, sigma] = off_diag_stats(a);
    return PairThresholds{mean + policy.asym_z * sigma, 0.0, sigma};
}

PairThresholds exclusive_threshold(const std::vector<std::vector<double>>& neg_a,
                                   const PairPolicy& policy) {
    auto [mean, sigma] = off_diag_stats(neg_a);
    return PairThresholds{0.0, std::min(mean + policy.excl_z * sigma, 1.0), sigma};
}

std::vector<std::pair<int, int>> asymmetric_pairs(
    const std::vector<std::vector<double>>& a, const PairPolicy& policy) {
    const int k = static_cast<int>(a.size());
    std::vector<std::pair<int, int>> pairs;
    if (k < 2) return pairs;
    const double cut = asymmetric_threshold(a, policy).asym_cut;
    for (int m = 0; m < k; ++m)
        for (int n = 0; n < k; ++n) {
            if (m == n) continue;
            // High A(m,n) means n's presence implies m; require the relation
            // not to hold the other way round, else the labels behave as one.
            if (a[m][n] > cut && a[n][m] <= cut) pairs.emplace_back(m, n);
        }
    return pairs;
}

std::vector<std::pair<int, int>> exclusive_pairs(
    const std::vector<std::vector<double>>& neg_a, const PairPolicy& policy) {
    const int k = static_cast<int>(neg_a.size());
    std::vector<std::pair<int, int>> pairs;
    if (k < 2) return pairs;
    const double cut = exclusive_threshold(neg_a, policy).excl_cut;
    for (int m = 0; m < k; ++m)
        for (int n = m + 1; n < k; ++n)
            if (neg_a[m][n] > cut && neg_a[n][m] > cut) pairs.emplace_back(m, n);
    return pairs;
}

} // namespace crab
