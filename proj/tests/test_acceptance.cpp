// Acceptance suite: runs every shipping criterion end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crab/config.hpp"
#include "crab/correlation.hpp"
#include "crab/dataset.hpp"
#include "crab/ensemble.hpp"
#include "crab/experiment.hpp"
#include "crab/metrics.hpp"
#include "crab/pool.hpp"
#include "crab/rng.hpp"
#include "crab/scoring.hpp"
#include "crab/strategy.hpp"
#include "crab/synth.hpp"
#include "oracle_quadrature.hpp"
#include "test_helpers.hpp"

using namespace crab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---- criterion 1: incomplete beta vs adaptive quadrature ----------------

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = 5.0 - 5.0 * rng.uniform(); // (0, 5]
        const double b = 5.0 - 5.0 * rng.uniform();
        const double x = rng.uniform();
        const double got = incomplete_beta(x, a, b);
        const double want = oracle::incomplete_beta(x, a, b);
        worst = std::max(worst, std::fabs(got - want));
    }
    const double secs = elapsed_s(start);
    report(1, "incomplete beta within 1e-8 of the quadrature oracle",
           worst < 1e-8 && secs < 5.0,
           "max |err| " + fmt(worst) + ", " + fmt(secs) + " s");
}

// ---- criterion 2: scoring-rule limits -----------------------------------

void criterion_2() {
    const BetaParams brier(1.0, 1.0);
    const BetaParams logloss(0.0, 0.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double p = (i + 1) / 51.0; // interior grid of 50 points
        worst = std::max(worst,
                         std::fabs(partial_loss_pos(p, brier) - 0.5 * (1 - p) * (1 - p)));
        worst = std::max(worst, std::fabs(partial_loss_neg(p, brier) - 0.5 * p * p));
        worst = std::max(worst, std::fabs(partial_loss_pos(p, logloss) + std::log(p)));
        worst = std::max(worst, std::fabs(partial_loss_neg(p, logloss) + std::log1p(-p)));
    }
    report(2, "squared-error and log-loss limits within 1e-10", worst < 1e-10,
           "max |err| " + fmt(worst));
}

// ---- criterion 3: correlation counting, complement, incremental ---------

void criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(303);
    bool ok = true;
    std::string what;
    for (int trial = 0; trial < 200 && ok; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(7));   // K <= 8
        const std::size_t n = 1 + rng.uniform_index(50);            // n <= 50
        SignMatrix labels(n, SignRow(k, -1));
        for (auto& row : labels)
            for (auto& v : row)
                if (rng.uniform() < 0.35) v = 1;

        const auto built = build_matrices(labels, k);
        for (int m = 0; m < k && ok; ++m)
            for (int c = 0; c < k && ok; ++c) {
                long both = 0, present = 0;
                for (const auto& row : labels)
                    if (row[c] > 0) {
                        ++present;
                        if (row[m] > 0) ++both;
                    }
                double a = m == c ? 1.0 : 0.0;
                double neg = 0.0;
                if (m != c && present > 0) {
                    a = static_cast<double>(both) / present;
                    neg = static_cast<double>(present - both) / present;
                }
                if (built.positive()[m][c] != a || built.negative()[m][c] != neg) {
                    ok = false;
                    what = "counting mismatch";
                }
                if (m != c && present > 0 &&
                    std::fabs(built.positive()[m][c] + built.negative()[m][c] - 1.0) >
                        1e-12) {
                    ok = false;
                    what = "complement identity";
                }
            }

        const std::size_t cut = rng.uniform_index(n + 1);
        CorrelationMatrices incremental(k);
        incremental.update(SignMatrix(labels.begin(), labels.begin() + cut));
        incremental.update(SignMatrix(labels.begin() + cut, labels.end()));
        if (incremental.positive() != built.positive() ||
            incremental.negative() != built.negative()) {
            ok = false;
            what = "incremental != rebuild";
        }
    }
    const double secs = elapsed_s(start);
    report(3, "correlation suite (200 random matrices)", ok && secs < 10.0,
           ok ? fmt(secs) + " s" : what);
}

// ---- criterion 4: ensemble Bayes identities ------------------------------

void criterion_4() {
    Rng rng(404);
    bool sums_ok = true, predictive_ok = true, single_ok = true;

    for (int trial = 0; trial < 60; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(4));
        const std::size_t e_count = 2 + rng.uniform_index(4);
        std::vector<std::map<long, ProbVector>> tables(e_count);
        std::vector<ProbVector> probs(e_count, ProbVector(k));
        for (std::size_t e = 0; e < e_count; ++e) {
            for (auto& v : probs[e]) v = 0.02 + 0.96 * rng.uniform();
            tables[e][0] = probs[e];
        }
        const auto ens = testing::table_ensemble(k, tables);

        SignRow y(k);
        for (auto& v : y) v = rng.uniform() < 0.5 ? 1 : -1;
        const auto w = reweight_posterior(ens, testing::id_vec(0), y);
        double sum = 0.0;
        for (double v : w) sum += v;
        if (std::fabs(sum - 1.0) > 1e-9) sums_ok = false;

        // post-reweighting predictive as an explicit weighted sum
        const auto predictive = predictive_after(ens, w, testing::id_vec(0));
        for (int l = 0; l < k; ++l) {
            double direct = 0.0;
            for (std::size_t e = 0; e < e_count; ++e) direct += w[e] * probs[e][l];
            if (std::fabs(predictive[l] - direct) > 1e-12) predictive_ok = false;
        }
    }

    // E=1: zero expected increment for every candidate, exactly
    for (int trial = 0; trial < 10; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(3));
        std::map<long, ProbVector> table;
        for (long id = 0; id < 6; ++id) {
            ProbVector p(k);
            for (auto& v : p) v = 0.05 + 0.9 * rng.uniform();
            table[id] = p;
        }
        const auto ens = testing::table_ensemble(k, {table});
        const SparseVec a1 = testing::id_vec(4), a2 = testing::id_vec(5);
        for (long cand = 0; cand < 4; ++cand) {
            const auto inc = expected_score_increment(
                ens, testing::id_vec(cand), {&a1, &a2},
                AttentionMatrix::identity(static_cast<std::size_t>(k)), BetaParams(0.1, 3.0));
            for (double v : inc)
                if (v != 0.0) single_ok = false;
        }
    }

    report(4, "ensemble-Bayes suite (weight sums, E=1 null update, predictive)",
           sums_ok && predictive_ok && single_ok,
           std::string(sums_ok ? "" : "weights; ") + (predictive_ok ? "" : "predictive; ") +
               (single_ok ? "" : "E=1"));
}

// ---- criterion 5: joint-enumeration increment oracle ---------------------

void criterion_5() {
    // fixed toy: E=2, K=2, 3 anchors, 4 candidates, exact joint enumeration
    const std::vector<std::vector<ProbVector>> member_tables{
        {{0.70, 0.20}, {0.55, 0.45}, {0.60, 0.30}, {0.20, 0.80}, {0.45, 0.55},
         {0.35, 0.25}, {0.75, 0.65}},
        {{0.30, 0.60}, {0.55, 0.25}, {0.40, 0.70}, {0.30, 0.30}, {0.65, 0.35},
         {0.45, 0.75}, {0.25, 0.15}}};
    std::vector<std::map<long, ProbVector>> tables(2);
    for (int e = 0; e < 2; ++e)
        for (long id = 0; id < 7; ++id) tables[e][id] = member_tables[e][id];
    const auto ens = testing::table_ensemble(2, tables);

    std::vector<std::vector<double>> a{{1.0, 0.8}, {0.5, 1.0}};
    const AttentionMatrix att = attention_matrix(a, 2.0);
    const double alpha = 0.1, beta = 3.0;
    const BetaParams params(alpha, beta);
    const std::vector<double> prior{0.5, 0.5};

    // anchors are ids 4..6, candidates ids 0..3
    const SparseVec a1 = testing::id_vec(4), a2 = testing::id_vec(5),
                    a3 = testing::id_vec(6);
    const std::vector<const SparseVec*> anchors{&a1, &a2, &a3};
    const std::vector<long> anchor_ids{4, 5, 6};

    auto ab_direct = [&](const ProbVector& p, const SignRow& y) {
        double s = 0.0;
        for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n) {
                const double sn = y[n] > 0 ? oracle::partial_loss_pos(p[n], alpha, beta)
                                           : oracle::partial_loss_neg(p[n], alpha, beta);
                s += att.values[m][n] * sn;
            }
        return s;
    };

    // anchor pseudo labels and before-scores under the prior
    std::vector<SignRow> pseudo(3);
    std::vector<double> before(3);
    for (int i = 0; i < 3; ++i) {
        ProbVector mean(2, 0.0);
        for (int e = 0; e < 2; ++e)
            for (int l = 0; l < 2; ++l)
                mean[l] += prior[e] * member_tables[e][anchor_ids[i]][l];
        pseudo[i] = SignRow{mean[0] > 0.5 ? std::int8_t(1) : std::int8_t(-1),
                            mean[1] > 0.5 ? std::int8_t(1) : std::int8_t(-1)};
        before[i] = ab_direct(mean, pseudo[i]);
    }

    double worst = 0.0;
    for (long cand = 0; cand < 4; ++cand) {
        const auto got = expected_score_increment(ens, testing::id_vec(cand), anchors, att,
                                                  params, /*joint_labels=*/true);

        // exhaustive enumeration over all joint label hypotheses
        std::vector<double> want(3, 0.0);
        for (int mask = 0; mask < 4; ++mask) {
            const SignRow y{mask & 1 ? std::int8_t(1) : std::int8_t(-1),
                            mask & 2 ? std::int8_t(1) : std::int8_t(-1)};
            double weight = 0.0;
            std::vector<double> lik(2);
            for (int e = 0; e < 2; ++e) {
                lik[e] = 1.0;
                for (int l = 0; l < 2; ++l) {
                    const double p = member_tables[e][cand][l];
                    lik[e] *= y[l] > 0 ? p : 1.0 - p;
                }
                weight += prior[e] * lik[e];
            }
            if (weight <= 0.0) continue;
            std::vector<double> w(2);
            const double total = prior[0] * lik[0] + prior[1] * lik[1];
            for (int e = 0; e < 2; ++e) w[e] = prior[e] * lik[e] / total;

            for (int i = 0; i < 3; ++i) {
                ProbVector after(2, 0.0);
                for (int e = 0; e < 2; ++e)
                    for (int l = 0; l < 2; ++l)
                        after[l] += w[e] * member_tables[e][anchor_ids[i]][l];
                want[static_cast<std::size_t>(i)] +=
                    weight * (ab_direct(after, pseudo[i]) - before[i]);
            }
        }
        for (int i = 0; i < 3; ++i)
            worst = std::max(worst, std::fabs(got[static_cast<std::size_t>(i)] -
                                              want[static_cast<std::size_t>(i)]));
    }
    report(5, "joint-label increment matches exhaustive enumeration", worst < 1e-9,
           "max |err| " + fmt(worst));
}

// ---- criterion 6: ablation equivalence -----------------------------------

void criterion_6() {
    SyntheticGenConfig gen;
    gen.instances = 500;
    gen.labels = 6;
    gen.feature_dim = 16;
    gen.factors = 2;
    gen.imbalance = 6.0;
    gen.seed = 61;
    const MultiLabelDataset ds = generate_base(gen);

    StrategyConfig sc;
    sc.budget.batch = 10;
    sc.budget.per_label = 4;
    sc.budget.hard_initial = 20;
    sc.budget.iterations = 5;
    sc.anchors = 16;
    sc.ensemble_size = 3;
    sc.classifier.epochs = 6;
    sc.attention = false;
    sc.refinement = false;

    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5 && ok; ++seed) {
        PoolState pool = split_pools(ds, 40, 60, seed);
        CorrelationMatrices matrices(ds.num_labels);
        matrices.update(gather_labels(ds, pool.labeled));
        const Ensemble ens = train_ensemble(
            gather_features(ds, pool.labeled), gather_labels(ds, pool.labeled),
            ds.feature_dim, sc.ensemble_size, sc.classifier, derive_seed(seed, "ensemble", 0));

        const auto crab_pick = query_batch(ens, pool, ds, &matrices, sc, seed, 0).selected;
        const auto besra_pick = besra_style_query(ens, pool, ds, sc, seed, 0);
        if (crab_pick != besra_pick) ok = false;
    }
    report(6, "attention+refinement off selects the BESRA-style batch (5 seeds)", ok, "");
}

// ---- criteria 7 and 8: end-to-end campaign --------------------------------

ExperimentConfig campaign_config(const fs::path& out, StrategyKind strategy) {
    ExperimentConfig cfg;
    cfg.synthetic = true;
    cfg.synth.instances = 2000;
    cfg.synth.labels = 10;
    cfg.synth.feature_dim = 32;
    cfg.synth.factors = 3;
    cfg.synth.max_rate = 0.35;
    cfg.synth.imbalance = 20.0;
    cfg.synth.noise = 0.35;
    cfg.synth.target_mean_ir = 20.0;
    cfg.synth.tolerance = 1.0;
    cfg.synth.seed = 70;
    cfg.strategy = strategy;
    cfg.seeds = {1, 2, 3, 4, 5};
    cfg.init_labeled = 100;
    cfg.validation = 400;
    cfg.out_dir = out.string();
    auto& sc = cfg.strategy_config;
    sc.budget.batch = 20;
    sc.budget.per_label = 10;
    sc.budget.hard_initial = 200;
    sc.budget.iterations = 10;
    sc.anchors = 32;
    sc.ensemble_size = 5;
    sc.classifier.lr = 0.3;
    sc.classifier.epochs = 30;
    sc.classifier.l2 = 1e-4;
    sc.classifier.batch = 16;
    return cfg;
}

void criteria_7_and_8() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path out = fs::temp_directory_path() / "crab_acceptance_campaign";
    fs::remove_all(out);
    fs::create_directories(out);

    const ExperimentConfig crab_cfg = campaign_config(out, StrategyKind::Crab);
    const MultiLabelDataset ds = materialize_dataset(crab_cfg);
    const double ds_ir = mean_ir(ds.label_matrix());

    const ExperimentResults crab_res = run_experiment_on(crab_cfg, ds);
    const ExperimentResults rand_res =
        run_experiment_on(campaign_config(out, StrategyKind::Random), ds);

    const int t_count = crab_cfg.strategy_config.budget.iterations;
    std::vector<double> crab_f1(t_count, 0.0), rand_f1(t_count, 0.0);
    double crab_ir = 0.0, rand_ir = 0.0;
    std::size_t crab_rows = 0, rand_rows = 0;
    for (const auto& o : crab_res.outcomes)
        for (const auto& r : o.rows) {
            crab_f1[static_cast<std::size_t>(r.iteration)] += r.micro_f1;
            crab_ir += r.mean_ir;
            ++crab_rows;
        }
    for (const auto& o : rand_res.outcomes)
        for (const auto& r : o.rows) {
            rand_f1[static_cast<std::size_t>(r.iteration)] += r.micro_f1;
            rand_ir += r.mean_ir;
            ++rand_rows;
        }
    for (auto& v : crab_f1) v /= 5.0;
    for (auto& v : rand_f1) v /= 5.0;
    crab_ir /= static_cast<double>(crab_rows);
    rand_ir /= static_cast<double>(rand_rows);

    int dominated = 0;
    for (int t = 0; t < t_count; ++t)
        if (crab_f1[static_cast<std::size_t>(t)] >=
            rand_f1[static_cast<std::size_t>(t)] - 1e-12)
            ++dominated;

    const double secs = elapsed_s(start);
    const bool premise_ok =
        ds.size() >= 1000 && ds.num_labels == 10 && std::fabs(ds_ir - 20.0) <= 1.5;
    const bool ok7 = premise_ok && crab_res.all_ok() && rand_res.all_ok() &&
                     crab_f1.back() >= rand_f1.back() && dominated >= 7 && secs < 600.0;
    report(7, "CRAB vs random micro-F1 on the imbalanced campaign", ok7,
           std::to_string(ds.size()) + " instances, MeanIR " + fmt(ds_ir) + ", final F1 " +
               fmt(crab_f1.back()) + " vs " + fmt(rand_f1.back()) + ", dominated " +
               std::to_string(dominated) + "/10, " + fmt(secs) + " s");

    const bool ok8 = crab_ir <= rand_ir;
    report(8, "CRAB selects more balanced batches (MeanIR)", ok8,
           "batch MeanIR " + fmt(crab_ir) + " vs " + fmt(rand_ir));
}

// ---- criterion 9: decay boundaries ---------------------------------------

void criterion_9() {
    bool ok = true;
    for (int z0 : {200, 300}) {
        for (auto kind : {DecayKind::Polynomial, DecayKind::Linear, DecayKind::Cosine}) {
            const int total = 10;
            if (decay_size(z0, 0, total, kind, 2.0) != static_cast<std::size_t>(z0))
                ok = false;
            if (decay_size(z0, total, total, kind, 2.0) != 0) ok = false;
            std::size_t prev = decay_size(z0, 0, total, kind, 2.0);
            for (int t = 1; t <= total; ++t) {
                const std::size_t v = decay_size(z0, t, total, kind, 2.0);
                if (v > prev) ok = false;
                prev = v;
            }
        }
    }
    report(9, "decay boundaries exact and monotone for Z0 in {200,300}", ok, "");
}

// ---- criterion 10: CLI determinism ----------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_10() {
#ifndef CRAB_CLI_PATH
    report(10, "byte-identical CSV across CLI reruns", false, "CLI path not configured");
#else
    const fs::path dir = fs::temp_directory_path() / "crab_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path config = dir / "run.conf";
    {
        std::ofstream out(config);
        out << "data.synthetic = true\n"
               "synth.instances = 250\n"
               "synth.labels = 5\n"
               "synth.feature_dim = 12\n"
               "synth.seed = 9\n"
               "experiment.strategy = crab\n"
               "experiment.seeds = 1,2\n"
               "pool.init_labeled = 20\n"
               "pool.validation = 40\n"
               "budget.N = 6\n"
               "budget.T = 3\n"
               "budget.N_label = 3\n"
               "budget.Z0 = 12\n"
               "strategy.anchors = 10\n"
               "ensemble.size = 2\n"
               "classifier.epochs = 5\n";
    }

    bool ok = true;
    std::string detail;
    for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string("\"") + CRAB_CLI_PATH + "\" run --config \"" +
                                config.string() + "\" --out \"" + (dir / run).string() +
                                "\" > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) {
            ok = false;
            detail = "CLI run failed";
        }
    }
    if (ok) {
        for (const char* file :
             {"results_crab.csv", "summary_crab.csv", "trends_crab.csv"}) {
            const std::string a = slurp(dir / "a" / file);
            const std::string b = slurp(dir / "b" / file);
            if (a.empty() || a != b) {
                ok = false;
                detail = std::string(file) + " differs";
            }
        }
    }
    report(10, "byte-identical CSV across CLI reruns", ok, detail);
#endif
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criteria_7_and_8();
    criterion_9();
    criterion_10();

    if (g_failures == 0) std::printf("acceptance: all criteria passed\n");
    else std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
