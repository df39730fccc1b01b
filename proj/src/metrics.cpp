#include "crab/metrics.hpp"

#include <algorithm>

#include "crab/error.hpp"

namespace crab {

double micro_f1(const SignMatrix& predictions, const SignMatrix& gold) {
    if (predictions.size() != gold.size())
        throw DimensionError("prediction/gold row counts differ");

    long long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].size() != gold[i].size())
            throw DimensionError("prediction/gold widths differ at row " + std::to_string(i));
        for (std::size_t k = 0; k < predictions[i].size(); ++k) {
            const bool p = predictions[i][k] > 0;
            const bool g = gold[i][k] > 0;
            if (p && g) ++tp;
            else if (p && !g) ++fp;
            else if (!p && g) ++fn;
        }
    }
    const long long denom = 2 * tp + fp + fn;
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double mean_ir(const SignMatrix& labels, bool* warned) {
    if (warned) *warned = false;
    if (labels.empty()) {
        if (warned) *warned = true;
        return 1.0;
    }

    const std::size_t k = labels[0].size();
    std::vector<long long> pos(k, 0);
    for (const auto& row : labels) {
        if (row.size() != k) throw DimensionError("ragged label matrix");
        for (std::size_t l = 0; l < k; ++l)
            if (row[l] > 0) ++pos[l];
    }

    const long long max_pos = *std::max_element(pos.begin(), pos.end());
    if (max_pos == 0) {
        // No label has support; nothing to average.
        if (warned) *warned = true;
        return 1.0;
    }

    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t l = 0; l < k; ++l) {
        if (pos[l] == 0) {
            if (warned) *warned = true;
            continue;
        }
        sum += static_cast<double>(max_pos) / static_cast<double>(pos[l]);
        ++counted;
    }
    return sum / static_cast<double>(counted);
}

double corr_avg(const std::vector<std::vector<double>>& a) {
    const std::size_t k = a.size();
    double sum = 0.0;
    for (std::size_t m = 0; m < k; ++m) {
        if (a[m].size() != k) throw DimensionError("correlation matrix is not square");
        for (std::size_t n = 0; n < k; ++n)
            if (m != n) sum += a[m][n];
    }
    if (k == 0) return 0.0;
    return sum / static_cast<double>(k * k);
}

} // namespace crab
