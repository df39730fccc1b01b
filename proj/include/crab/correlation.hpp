#ifndef CRAB_CORRELATION_HPP
#define CRAB_CORRELATION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "crab/dataset.hpp"

namespace crab {

// Positive (A) and negative (NegA) label-correlation matrices estimated from
// the labeled pool. Integer co-occurrence counts are the persistent state so
// incremental updates stay exact; the ratio matrices are derived from them.
//
//   A(m,n)    = #(y^m=+1 and y^n=+1) / #(y^n=+1)   for m != n, A(m,m) = 1
//   NegA(m,n) = #(y^m=-1 and y^n=+1) / #(y^n=+1)   for m != n, NegA(m,m) = 0
//
// Columns whose label never appears get zero off-diagonals.
class CorrelationMatrices {
public:
    explicit CorrelationMatrices(int num_labels);

    // Accumulate a batch of labeled rows and refresh A / NegA.
    void update(const SignMatrix& labels);

    int num_labels() const { return k_; }
    long long rows_seen() const { return rows_seen_; }
    const std::vector<std::vector<double>>& positive() const { return a_; }
    const std::vector<std::vector<double>>& negative() const { return neg_a_; }
    const std::vector<long long>& label_counts() const { return label_counts_; }
    const std::vector<std::vector<long long>>& pos_counts() const { return pos_counts_; }

private:
    void recompute();

    int k_;
    long long rows_seen_ = 0;
    std::vector<std::vector<long long>> pos_counts_; // [m][n] joint-positive counts
    std::vector<long long> label_counts_;            // positive count per label
    std::vector<std::vector<double>> a_;
    std::vector<std::vector<double>> neg_a_;
};

CorrelationMatrices build_matrices(const SignMatrix& labels, int num_labels);

// z-score policy over the off-diagonal entry populations: the asymmetric cut
// is mean + asym_z * std of A's off-diagonals, the exclusivity cut is
// mean + excl_z * std of NegA's off-diagonals capped at 1.
struct PairPolicy {
    double asym_z = 1.0;
    double excl_z = 2.0;
};

struct PairThresholds {
    double asym_cut = 0.0;
    double excl_cut = 0.0;
    double sigma = 0.0; // std of the off-diagonal entries the cut came from
};

PairThresholds asymmetric_threshold(const std::vector<std::vector<double>>& a,
                                    const PairPolicy& policy);
PairThresholds exclusive_threshold(const std::vector<std::vector<double>>& neg_a,
                                   const PairPolicy& policy);

// Ordered pairs (independent m, dependent n): A(m,n) above the cut while the
// reciprocal A(n,m) is not, so n's presence implies m but not conversely.
std::vector<std::pair<int, int>> asymmetric_pairs(
    const std::vector<std::vector<double>>& a, const PairPolicy& policy);

// Unordered pairs (m < n) exceeding the exclusivity cut in both directions.
std::vector<std::pair<int, int>> exclusive_pairs(
    const std::vector<std::vector<double>>& neg_a, const PairPolicy& policy);

} // namespace crab

#endif
