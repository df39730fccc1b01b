#include "crab/scoring.hpp"

#include <cmath>
#include <limits>

#include "crab/error.hpp"

namespace crab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lentz's continued-fraction evaluation for the regularized incomplete beta.
double betacf(double a, double b, double x) {
    const int max_iter = 400;
    const double eps = 1e-16;
    const double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

// Adaptive Simpson for the two one-sided alpha=0 / beta=0 corners, where the
// incomplete-beta parameterization is unavailable but the integral is finite.
template <typename F>
double simpson_rec(const F& f, double lo, double hi, double flo, double fmid, double fhi,
                   double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flm = f(lmid);
    const double frm = f(rmid);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, lo, mid, flo, flm, fmid, left, tol * 0.5, depth - 1) +
           simpson_rec(f, mid, hi, fmid, frm, fhi, right, tol * 0.5, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double lo, double hi, double tol) {
    if (hi <= lo) return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, 48);
}

} // namespace

BetaParams::BetaParams(double a, double b) : alpha(a), beta(b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("beta scoring parameters must be finite and >= 0");
}

double complete_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("complete_beta requires a, b > 0");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("incomplete_beta requires a > 0 and b > 0");
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("incomplete_beta requires x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return complete_beta(a, b);

    const double lnpre = a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(lnpre) * betacf(a, b, x) / a;
    return complete_beta(a, b) - std::exp(lnpre) * betacf(b, a, 1.0 - x) / b;
}

double partial_loss_pos(double p, const BetaParams& params) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("partial loss requires p in [0,1]");
    const double a = params.alpha, b = params.beta;
    if (a > 0.0)
        return incomplete_beta(1.0, a, b + 1.0) - incomplete_beta(p, a, b + 1.0);
    // alpha = 0: integrand ~ 1/t near 0; unbounded exactly at p = 0.
    if (p == 0.0) return kInf;
    if (b == 0.0) return -std::log(p);
    return adaptive_simpson([b](double t) { return std::pow(1.0 - t, b) / t; }, p, 1.0,
                            1e-12);
}

double partial_loss_neg(double p, const BetaParams& params) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("partial loss requires p in [0,1]");
    const double a = params.alpha, b = params.beta;
    if (b > 0.0) return incomplete_beta(p, a + 1.0, b);
    if (p == 1.0) return kInf;
    if (a == 0.0) return -std::log1p(-p);
    return adaptive_simpson([a](double t) { return std::pow(t, a) / (1.0 - t); }, 0.0, p,
                            1e-12);
}

double br_score(const ProbVector& p, const SignRow& y, const BetaParams& params) {
    if (p.size() != y.size())
        throw DimensionError("probability/label vector lengths differ");
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        s += y[k] > 0 ? partial_loss_pos(p[k], params) : partial_loss_neg(p[k], params);
    return s;
}

std::vector<double> AttentionMatrix::column_sums() const {
    const std::size_t k = values.size();
    std::vector<double> sums(k, 0.0);
    for (std::size_t m = 0; m < k; ++m)
        for (std::size_t n = 0; n < k; ++n) sums[n] += values[m][n];
    return sums;
}

AttentionMatrix AttentionMatrix::identity(std::size_t k, double gamma) {
    AttentionMatrix att;
    att.gamma = gamma;
    att.values.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) att.values[i][i] = 1.0;
    return att;
}

AttentionMatrix attention_matrix(const std::vector<std::vector<double>>& a, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("attention gamma must be > 0");
    const std::size_t k = a.size();
    AttentionMatrix att;
    att.gamma = gamma;
    att.values.assign(k, std::vector<double>(k, 0.0));

    for (std::size_t n = 0; n < k; ++n) {
        if (a[n].size() != k) throw DimensionError("correlation matrix is not square");
        double colmax = 0.0; // max over the column excluding the diagonal
        for (std::size_t m = 0; m < k; ++m)
            if (m != n && a[m][n] > colmax) colmax = a[m][n];
        if (colmax > 0.0)
            for (std::size_t m = 0; m < k; ++m)
                if (m != n) att.values[m][n] = a[m][n] / (gamma * colmax);
        att.values[n][n] = 1.0;
    }
    return att;
}

double ab_score(const ProbVector& p, const SignRow& y, const AttentionMatrix& att,
                const BetaParams& params) {
    if (att.size() != p.size())
        throw DimensionError("attention matrix size does not match label space");
    return ab_score_with_colsums(p, y, att.column_sums(), params);
}

double ab_score_with_colsums(const ProbVector& p, const SignRow& y,
                             const std::vector<double>& att_colsums,
                             const BetaParams& params) {
    if (p.size() != y.size() || p.size() != att_colsums.size())
        throw DimensionError("score input lengths differ");
    // sum_m sum_n att(m,n) S^n == sum_n colsum(n) S^n
    double s = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double sn =
            y[n] > 0 ? partial_loss_pos(p[n], params) : partial_loss_neg(p[n], params);
        s += att_colsums[n] * sn;
    }
    return s;
}

} // namespace crab
