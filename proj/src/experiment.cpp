#include "crab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "crab/error.hpp"
#include "crab/rng.hpp"
#include "crab/strategy.hpp"
#include "crab/synth.hpp"

namespace crab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

void dump_matrix(const std::string& path, const std::vector<std::vector<double>>& m) {
    std::string text;
    for (const auto& row : m) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) text += ',';
            text += fmt(row[j]);
        }
        text += '\n';
    }
    write_file(path, text);
}

SignMatrix predict_signs(const Ensemble& ens, const MultiLabelDataset& ds,
                         const std::vector<std::size_t>& indices) {
    SignMatrix out;
    out.reserve(indices.size());
    for (std::size_t i : indices)
        out.push_back(pseudo_label_row(posterior_predictive(ens, ds.instances[i].features)));
    return out;
}

} // namespace

bool ExperimentResults::all_ok() const {
    for (const auto& o : outcomes)
        if (!o.ok) return false;
    return true;
}

std::vector<const IterationRecord*> ExperimentResults::completed_rows() const {
    std::vector<const IterationRecord*> rows;
    for (const auto& o : outcomes)
        if (o.ok)
            for (const auto& r : o.rows) rows.push_back(&r);
    return rows;
}

PoolTrendCounts track_pool_trends(const SignMatrix& pseudo_unlabeled,
                                  const std::vector<std::pair<int, int>>& exclusive) {
    PoolTrendCounts counts;
    for (const auto& row : pseudo_unlabeled) {
        bool any_positive = false;
        for (auto v : row)
            if (v > 0) {
                any_positive = true;
                break;
            }
        if (!any_positive) ++counts.hard;

        for (const auto& [m, n] : exclusive) {
            if (row[m] > 0 && row[n] > 0) {
                ++counts.conflict;
                break;
            }
        }
    }
    return counts;
}

MultiLabelDataset materialize_dataset(const ExperimentConfig& cfg) {
    if (cfg.synthetic) return generate_synthetic(cfg.synth);
    return load_dataset(cfg.data_path);
}

namespace {

SeedOutcome run_seed(const ExperimentConfig& cfg, const MultiLabelDataset& ds, long seed) {
    SeedOutcome outcome;
    outcome.seed = seed;
    const auto& sc = cfg.strategy_config;
    const auto useed = static_cast<std::uint64_t>(seed);

    PoolState pool = split_pools(ds, cfg.init_labeled, cfg.validation, useed);
    CorrelationMatrices matrices(ds.num_labels);

    const std::string dump_dir = cfg.out_dir + "/correlation";
    if (cfg.dump_correlation) std::filesystem::create_directories(dump_dir);

    for (int t = 0; t < sc.budget.iterations; ++t) {
        pool.iteration = t;

        const Ensemble ens = train_ensemble(
            gather_features(ds, pool.labeled), gather_labels(ds, pool.labeled),
            ds.feature_dim, sc.ensemble_size, sc.classifier,
            derive_seed(useed, "ensemble", static_cast<std::uint64_t>(t)));

        IterationRecord row;
        row.seed = seed;
        row.iteration = t;
        row.micro_f1 = micro_f1(predict_signs(ens, ds, pool.validation),
                                gather_labels(ds, pool.validation));

        // Fold the labels annotated since the previous iteration into the
        // correlation counts, then report the current inter-correlation.
        const auto seen = static_cast<std::size_t>(matrices.rows_seen());
        if (pool.labeled.size() > seen) {
            std::vector<std::size_t> fresh(pool.labeled.begin() + seen, pool.labeled.end());
            matrices.update(gather_labels(ds, fresh));
        }
        row.corr_avg = corr_avg(matrices.positive());

        const SignMatrix pseudo = pseudo_labels(ens, gather_features(ds, pool.unlabeled));
        const auto excl = exclusive_pairs(matrices.negative(), sc.pair_policy);
        const PoolTrendCounts trends = track_pool_trends(pseudo, excl);
        row.hard_count = trends.hard;
        row.conflict_count = trends.conflict;

        std::vector<std::size_t> selected;
        switch (cfg.strategy) {
            case StrategyKind::Crab:
                selected = query_batch(ens, pool, ds, &matrices, sc, useed, t).selected;
                break;
            case StrategyKind::Besra:
                selected = besra_style_query(ens, pool, ds, sc, useed, t);
                break;
            case StrategyKind::Random:
                selected = random_query(pool, static_cast<std::size_t>(sc.budget.batch),
                                        derive_seed(useed, "random",
                                                    static_cast<std::uint64_t>(t)));
                break;
        }

        if (cfg.dump_correlation) {
            const std::string stem = dump_dir + "/" + strategy_name(cfg.strategy) +
                                     "_seed" + std::to_string(seed) + "_iter" +
                                     std::to_string(t);
            dump_matrix(stem + "_A.csv", matrices.positive());
            dump_matrix(stem + "_NegA.csv", matrices.negative());
        }

        row.mean_ir = mean_ir(gather_labels(ds, selected));
        annotate(pool, selected);
        pool.iteration = t + 1;
        row.labeled_size = pool.labeled.size();
        outcome.rows.push_back(row);
    }
    return outcome;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResults& results) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string tag = results.strategy;

    std::string rows_csv = "seed,iteration,labeled_size,micro_f1,mean_ir_selected,corr_avg\n";
    std::string trends_csv = "seed,iteration,hard_count,conflict_count\n";
    for (const auto& o : results.outcomes) {
        if (!o.ok) continue;
        for (const auto& r : o.rows) {
            rows_csv += std::to_string(r.seed) + ',' + std::to_string(r.iteration) + ',' +
                        std::to_string(r.labeled_size) + ',' + fmt(r.micro_f1) + ',' +
                        fmt(r.mean_ir) + ',' + fmt(r.corr_avg) + '\n';
            trends_csv += std::to_string(r.seed) + ',' + std::to_string(r.iteration) + ',' +
                          std::to_string(r.hard_count) + ',' +
                          std::to_string(r.conflict_count) + '\n';
        }
    }
    write_file(cfg.out_dir + "/results_" + tag + ".csv", rows_csv);
    write_file(cfg.out_dir + "/trends_" + tag + ".csv", trends_csv);

    // Mean and sample std across seeds, one row per iteration.
    std::string summary =
        "iteration,labeled_size,micro_f1_mean,micro_f1_std,"
        "mean_ir_selected_mean,mean_ir_selected_std,corr_avg_mean,corr_avg_std\n";
    const int iterations = cfg.strategy_config.budget.iterations;
    for (int t = 0; t < iterations; ++t) {
        std::vector<double> f1s, irs, corrs;
        std::size_t labeled_size = 0;
        for (const auto& o : results.outcomes) {
            if (!o.ok) continue;
            const auto& r = o.rows[static_cast<std::size_t>(t)];
            f1s.push_back(r.micro_f1);
            irs.push_back(r.mean_ir);
            corrs.push_back(r.corr_avg);
            labeled_size = r.labeled_size;
        }
        if (f1s.empty()) continue;
        auto mean_std = [](const std::vector<double>& v) {
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            const double std_dev =
                v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
            return std::pair<double, double>(mean, std_dev);
        };
        auto [f1m, f1s_] = mean_std(f1s);
        auto [irm, irs_] = mean_std(irs);
        auto [cm, cs] = mean_std(corrs);
        summary += std::to_string(t) + ',' + std::to_string(labeled_size) + ',' + fmt(f1m) +
                   ',' + fmt(f1s_) + ',' + fmt(irm) + ',' + fmt(irs_) + ',' + fmt(cm) + ',' +
                   fmt(cs) + '\n';
    }
    write_file(cfg.out_dir + "/summary_" + tag + ".csv", summary);
}

} // namespace

ExperimentResults run_experiment_on(const ExperimentConfig& cfg,
                                    const MultiLabelDataset& ds) {
    validate_config(cfg);
    if (cfg.init_labeled + cfg.validation > ds.size())
        throw ConfigError("pool sizes exceed the dataset");

    ExperimentResults results;
    results.strategy = strategy_name(cfg.strategy);
    for (long seed : cfg.seeds) {
        try {
            results.outcomes.push_back(run_seed(cfg, ds, seed));
        } catch (const std::exception& e) {
            SeedOutcome failed;
            failed.seed = seed;
            failed.ok = false;
            failed.error = e.what();
            results.outcomes.push_back(failed);
            std::cerr << "seed " << seed << " aborted: " << e.what() << "\n";
        }
    }
    write_outputs(cfg, results);
    return results;
}

ExperimentResults run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const MultiLabelDataset ds = materialize_dataset(cfg);
    return run_experiment_on(cfg, ds);
}

} // namespace crab
