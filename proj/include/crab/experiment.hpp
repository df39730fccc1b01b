#ifndef CRAB_EXPERIMENT_HPP
#define CRAB_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "crab/config.hpp"
#include "crab/dataset.hpp"
#include "crab/metrics.hpp"

namespace crab {

// One CSV row: metrics of iteration t under one seed. micro_f1 and corr_avg
// are measured on the pool state entering the iteration (so iteration-0 rows
// coincide across strategies sharing a seed); labeled_size and mean_ir (of
// the selected batch) describe the batch annotated during the iteration.
struct IterationRecord : MetricReport {
    std::size_t labeled_size = 0;
    std::size_t hard_count = 0;
    std::size_t conflict_count = 0;
};

struct SeedOutcome {
    long seed = 0;
    bool ok = true;
    std::string error;
    std::vector<IterationRecord> rows;
};

struct ExperimentResults {
    std::string strategy;
    std::vector<SeedOutcome> outcomes;

    bool all_ok() const;
    std::vector<const IterationRecord*> completed_rows() const;
};

struct PoolTrendCounts {
    std::size_t hard = 0;      // all-negative pseudo rows in U
    std::size_t conflict = 0;  // rows asserting both sides of an exclusive pair
};

PoolTrendCounts track_pool_trends(const SignMatrix& pseudo_unlabeled,
                                  const std::vector<std::pair<int, int>>& exclusive);

// Runs the configured strategy over every seed (failed seeds are recorded and
// skipped, the rest continue) and writes results_<strategy>.csv,
// summary_<strategy>.csv and trends_<strategy>.csv into cfg.out_dir.
ExperimentResults run_experiment(const ExperimentConfig& cfg);

// As above but against an already materialized dataset (no file/synth step).
ExperimentResults run_experiment_on(const ExperimentConfig& cfg,
                                    const MultiLabelDataset& ds);

// Loads or generates the dataset named by the config.
MultiLabelDataset materialize_dataset(const ExperimentConfig& cfg);

} // namespace crab

#endif
