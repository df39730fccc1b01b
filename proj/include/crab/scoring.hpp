#ifndef CRAB_SCORING_HPP
#define CRAB_SCORING_HPP

#include <vector>

#include "crab/dataset.hpp"

namespace crab {

// Shape parameters of the beta-family scoring rule. alpha=beta=0 is log-loss,
// alpha=beta=1 is the squared-error (Brier) family.
struct BetaParams {
    double alpha = 0.1;
    double beta = 3.0;

    BetaParams() = default;
    BetaParams(double a, double b);
};

// Unnormalized lower incomplete beta B(x;a,b) = int_0^x t^(a-1)(1-t)^(b-1) dt,
// a,b > 0, computed by the continued-fraction expansion of the regularized
// function with the symmetry transform for x > (a+1)/(a+b+2).
double incomplete_beta(double x, double a, double b);

// Complete beta function B(a,b).
double complete_beta(double a, double b);

// Partial loss when the true label is positive:
//   L(1|p) = int_p^1 t^(alpha-1)(1-t)^beta dt.
// Monotone non-increasing in p, zero at p=1. Unbounded (returns +inf) at p=0
// when alpha=0.
double partial_loss_pos(double p, const BetaParams& params);

// Partial loss when the true label is negative:
//   L(0|p) = int_0^p t^alpha (1-t)^(beta-1) dt.
// Monotone non-decreasing in p, zero at p=0. Returns +inf at p=1 when beta=0.
double partial_loss_neg(double p, const BetaParams& params);

// Binary-relevance sum score: per-label partial loss picked by the label sign,
// summed over the label space.
double br_score(const ProbVector& p, const SignRow& y, const BetaParams& params);

// Column-normalized positive-correlation matrix used to weight cross-label
// score contributions. Off-diagonals live in [0, 1/gamma]; diagonal is 1 so
// each label's own score keeps full weight.
struct AttentionMatrix {
    std::vector<std::vector<double>> values; // K x K
    double gamma = 2.0;

    std::size_t size() const { return values.size(); }

    // Column sums over m, including the unit diagonal. ab_score contracts
    // against these.
    std::vector<double> column_sums() const;

    static AttentionMatrix identity(std::size_t k, double gamma = 2.0);
};

// Off-diagonal entries A(m,n) / (gamma * max over m!=n of A(m,n)); columns
// with no off-diagonal mass stay zero off the diagonal.
AttentionMatrix attention_matrix(const std::vector<std::vector<double>>& a, double gamma);

// Correlation-aware score: sum over (m,n) of att(m,n) * S_BR^n(p_n, y_n).
// With identity attention this reduces to br_score exactly.
double ab_score(const ProbVector& p, const SignRow& y, const AttentionMatrix& att,
                const BetaParams& params);

// ab_score with precomputed attention column sums (hot-loop variant).
double ab_score_with_colsums(const ProbVector& p, const SignRow& y,
                             const std::vector<double>& att_colsums,
                             const BetaParams& params);

} // namespace crab

#endif
