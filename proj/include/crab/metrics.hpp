#ifndef CRAB_METRICS_HPP
#define CRAB_METRICS_HPP

#include <vector>

#include "crab/dataset.hpp"

namespace crab {

struct MetricReport {
    double micro_f1 = 0.0;
    double mean_ir = 1.0;
    double corr_avg = 0.0;
    int iteration = 0;
    long seed = 0;
};

// Pooled F1 over all (instance,label) cells: 2TP / (2TP + FP + FN).
// Returns 0 when the denominator is 0.
double micro_f1(const SignMatrix& predictions, const SignMatrix& gold);

// Mean imbalance ratio: IRLbl(l) = max positive count over labels / positive
// count of l, averaged over labels. Labels without positives are excluded and
// *warned (when given) is set; with no positive label at all, returns 1 with
// the warning set.
double mean_ir(const SignMatrix& labels, bool* warned = nullptr);

// Off-diagonal mass of the positive correlation matrix divided by K*K.
double corr_avg(const std::vector<std::vector<double>>& a);

} // namespace crab

#endif
