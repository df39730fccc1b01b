#include <doctest.h>

#include <cmath>
#include <limits>

#include "crab/ensemble.hpp"
#include "crab/error.hpp"
#include "crab/rng.hpp"
#include "test_helpers.hpp"

using namespace crab;

namespace {

// small dense-ish random training set
struct ToyData {
    std::vector<SparseVec> storage;
    std::vector<const SparseVec*> features;
    SignMatrix labels;
};

ToyData make_toy(std::size_t n, int k, std::size_t dim, std::uint64_t seed) {
    ToyData toy;
    Rng rng(seed);
    toy.storage.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SparseVec v;
        for (std::uint32_t d = 0; d < dim; ++d)
            if (rng.uniform() < 0.6) v.entries.emplace_back(d, rng.normal());
        toy.storage.push_back(v);
        SignRow row(k);
        for (int l = 0; l < k; ++l) row[l] = rng.uniform() < 0.5 ? 1 : -1;
        toy.labels.push_back(row);
    }
    for (const auto& v : toy.storage) toy.features.push_back(&v);
    return toy;
}

} // namespace

TEST_CASE("logistic gradient matches central finite differences") {
    const int k = 3;
    const std::size_t dim = 6;
    auto toy = make_toy(12, k, dim, 42);

    LogisticConfig cfg;
    cfg.seed = 7;
    cfg.l2 = 0.05;
    LogisticOvr model(k, dim, cfg);

    // randomize the evaluation point beyond the small init noise
    Rng rng(99);
    for (int l = 0; l < k; ++l) {
        for (auto& w : model.weights(l)) w = rng.normal();
        model.bias(l) = rng.normal();
    }

    const double h = 1e-6;
    for (int l = 0; l < k; ++l) {
        std::vector<double> grad;
        double grad_b = 0.0;
        model.gradient(toy.features, toy.labels, l, grad, grad_b);

        for (std::size_t d = 0; d < dim; ++d) {
            const double keep = model.weights(l)[d];
            model.weights(l)[d] = keep + h;
            const double up = model.loss(toy.features, toy.labels);
            model.weights(l)[d] = keep - h;
            const double down = model.loss(toy.features, toy.labels);
            model.weights(l)[d] = keep;
            const double fd = (up - down) / (2.0 * h);
            CHECK(std::fabs(fd - grad[d]) <=
                  1e-5 * std::max({std::fabs(fd), std::fabs(grad[d]), 1e-3}));
        }
        const double keep = model.bias(l);
        model.bias(l) = keep + h;
        const double up = model.loss(toy.features, toy.labels);
        model.bias(l) = keep - h;
        const double down = model.loss(toy.features, toy.labels);
        model.bias(l) = keep;
        const double fd = (up - down) / (2.0 * h);
        CHECK(std::fabs(fd - grad_b) <=
              1e-5 * std::max({std::fabs(fd), std::fabs(grad_b), 1e-3}));
    }
}

TEST_CASE("logistic learns a separable toy") {
    // label 0 fires for x > 0, label 1 for x < 0
    std::vector<SparseVec> storage;
    SignMatrix labels;
    for (int i = 0; i < 20; ++i) {
        SparseVec v;
        const double x = i < 10 ? 1.0 + 0.1 * i : -1.0 - 0.1 * (i - 10);
        v.entries.emplace_back(0, x);
        storage.push_back(v);
        labels.push_back(i < 10 ? SignRow{1, -1} : SignRow{-1, 1});
    }
    std::vector<const SparseVec*> features;
    for (const auto& v : storage) features.push_back(&v);

    LogisticConfig cfg;
    cfg.lr = 0.5;
    cfg.epochs = 200;
    cfg.l2 = 0.0;
    cfg.batch = 20;
    cfg.seed = 3;
    const auto model = fit_logistic(features, labels, 1, cfg);

    for (int i = 0; i < 20; ++i) {
        const ProbVector p = model->predict_proba(storage[i]);
        CHECK((p[0] > 0.5) == (labels[i][0] > 0));
        CHECK((p[1] > 0.5) == (labels[i][1] > 0));
    }
}

TEST_CASE("zero epochs keeps the random-init model") {
    auto toy = make_toy(8, 2, 4, 11);
    LogisticConfig cfg;
    cfg.epochs = 0;
    cfg.seed = 5;
    LogisticOvr untouched(2, 4, cfg);
    const auto trained = fit_logistic(toy.features, toy.labels, 4, cfg);
    const ProbVector a = untouched.predict_proba(toy.storage[0]);
    const ProbVector b = trained->predict_proba(toy.storage[0]);
    CHECK(a == b);
}

TEST_CASE("training is deterministic under the seed") {
    auto toy = make_toy(16, 2, 5, 23);
    LogisticConfig cfg;
    cfg.epochs = 15;
    cfg.seed = 77;
    const auto m1 = fit_logistic(toy.features, toy.labels, 5, cfg);
    const auto m2 = fit_logistic(toy.features, toy.labels, 5, cfg);
    for (const auto& v : toy.storage) CHECK(m1->predict_proba(v) == m2->predict_proba(v));
}

TEST_CASE("full-batch loss is non-increasing over epochs") {
    auto toy = make_toy(20, 2, 5, 31);
    double prev = std::numeric_limits<double>::infinity();
    for (int epochs = 0; epochs <= 8; ++epochs) {
        LogisticConfig cfg;
        cfg.lr = 0.2;
        cfg.epochs = epochs;
        cfg.l2 = 1e-3;
        cfg.batch = 0; // 0 = full batch
        cfg.seed = 19;
        LogisticOvr model(2, 5, cfg);
        model.fit(toy.features, toy.labels);
        const double loss = model.loss(toy.features, toy.labels);
        CHECK(loss <= prev + 1e-12);
        prev = loss;
    }
}

TEST_CASE("non-finite features are rejected") {
    SparseVec bad;
    bad.entries.emplace_back(0, std::numeric_limits<double>::quiet_NaN());
    std::vector<const SparseVec*> features{&bad};
    SignMatrix labels{{1, -1}};
    LogisticConfig cfg;
    CHECK_THROWS_AS(fit_logistic(features, labels, 1, cfg), TrainingError);
}

TEST_CASE("ensemble training") {
    auto toy = make_toy(14, 3, 4, 53);
    LogisticConfig cfg;
    cfg.epochs = 5;

    SUBCASE("five members with uniform weights") {
        const Ensemble ens = train_ensemble(toy.features, toy.labels, 4, 5, cfg, 9);
        CHECK(ens.size() == 5);
        for (double w : ens.weights) CHECK(w == doctest::Approx(0.2));
    }
    SUBCASE("degenerate single-member ensemble") {
        const Ensemble ens = train_ensemble(toy.features, toy.labels, 4, 1, cfg, 9);
        CHECK(ens.size() == 1);
        CHECK(ens.weights[0] == doctest::Approx(1.0));
    }
    SUBCASE("members differ from each other but reproduce under the seed") {
        const Ensemble a = train_ensemble(toy.features, toy.labels, 4, 3, cfg, 9);
        const Ensemble b = train_ensemble(toy.features, toy.labels, 4, 3, cfg, 9);
        for (std::size_t e = 0; e < a.size(); ++e)
            CHECK(a.members[e]->predict_proba(toy.storage[0]) ==
                  b.members[e]->predict_proba(toy.storage[0]));
        CHECK(a.members[0]->predict_proba(toy.storage[0]) !=
              a.members[1]->predict_proba(toy.storage[0]));
    }
    SUBCASE("empty labeled pool fails") {
        std::vector<const SparseVec*> none;
        CHECK_THROWS_AS(train_ensemble(none, {}, 4, 3, cfg, 9), TrainingError);
    }
}

TEST_CASE("posterior predictive averages member probabilities") {
    using testing::id_vec;
    const auto ens = testing::table_ensemble(1, {{{0, {0.7}}}, {{0, {0.4}}}});
    CHECK(posterior_predictive(ens, id_vec(0))[0] == doctest::Approx(0.55));

    SUBCASE("identical members collapse to any member's output") {
        const auto same = testing::table_ensemble(1, {{{0, {0.3}}}, {{0, {0.3}}}});
        CHECK(posterior_predictive(same, id_vec(0))[0] == doctest::Approx(0.3));
    }
    SUBCASE("non-uniform weights") {
        const auto weighted =
            testing::table_ensemble(1, {{{0, {1.0}}}, {{0, {0.0}}}}, {0.8, 0.2});
        CHECK(posterior_predictive(weighted, id_vec(0))[0] == doctest::Approx(0.8));
    }
}

TEST_CASE("pseudo labels threshold at strictly 0.5") {
    CHECK(pseudo_label_row({0.55}) == SignRow{1});
    CHECK(pseudo_label_row({0.5}) == SignRow{-1});
    CHECK(pseudo_label_row({0.49, 0.2}) == SignRow{-1, -1});
}

TEST_CASE("posterior reweighting") {
    using testing::id_vec;

    SUBCASE("single-label likelihoods normalize directly") {
        const auto ens = testing::table_ensemble(1, {{{0, {0.8}}}, {{0, {0.2}}}});
        const auto w = reweight_posterior(ens, id_vec(0), {1});
        CHECK(w[0] == doctest::Approx(0.8));
        CHECK(w[1] == doctest::Approx(0.2));
    }
    SUBCASE("single member keeps weight 1 for any hypothesis") {
        const auto ens = testing::table_ensemble(2, {{{0, {0.3, 0.9}}}});
        CHECK(reweight_posterior(ens, id_vec(0), {1, -1})[0] == doctest::Approx(1.0));
        CHECK(reweight_posterior(ens, id_vec(0), {-1, 1})[0] == doctest::Approx(1.0));
    }
    SUBCASE("matches the product-and-normalize oracle on a 2-label 3-member case") {
        const std::vector<ProbVector> probs{{0.7, 0.2}, {0.4, 0.9}, {0.5, 0.5}};
        const auto ens = testing::table_ensemble(
            2, {{{0, probs[0]}}, {{0, probs[1]}}, {{0, probs[2]}}});
        const SignRow y{1, -1};
        double lik[3], total = 0.0;
        for (int e = 0; e < 3; ++e) {
            lik[e] = probs[e][0] * (1.0 - probs[e][1]) / 3.0;
            total += lik[e];
        }
        const auto w = reweight_posterior(ens, id_vec(0), y);
        for (int e = 0; e < 3; ++e) CHECK(w[e] == doctest::Approx(lik[e] / total));
    }
    SUBCASE("weights sum to 1 within 1e-9 on random inputs") {
        Rng rng(404);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::map<long, ProbVector>> tables(3);
            for (auto& t : tables) {
                ProbVector p(4);
                for (auto& v : p) v = 0.05 + 0.9 * rng.uniform();
                t[0] = p;
            }
            const auto ens = testing::table_ensemble(4, tables);
            SignRow y(4);
            for (auto& v : y) v = rng.uniform() < 0.5 ? 1 : -1;
            const auto w = reweight_posterior(ens, id_vec(0), y);
            double sum = 0.0;
            for (double v : w) sum += v;
            CHECK(std::fabs(sum - 1.0) < 1e-9);
        }
    }
    SUBCASE("all-zero likelihood falls back to the prior") {
        const auto ens = testing::table_ensemble(1, {{{0, {0.0}}}, {{0, {0.0}}}});
        const auto w = reweight_posterior(ens, id_vec(0), {1});
        CHECK(w[0] == doctest::Approx(0.5));
        CHECK(w[1] == doctest::Approx(0.5));
    }
    SUBCASE("the member most confident in the pseudo label never loses weight") {
        Rng rng(606);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::map<long, ProbVector>> tables(4);
            std::vector<ProbVector> probs(4, ProbVector(3));
            for (int e = 0; e < 4; ++e) {
                for (auto& v : probs[e]) v = 0.05 + 0.9 * rng.uniform();
                tables[e][0] = probs[e];
            }
            const auto ens = testing::table_ensemble(3, tables);
            const SignRow star = pseudo_label_row(posterior_predictive(ens, id_vec(0)));
            double best_lik = -1.0;
            int best = 0;
            for (int e = 0; e < 4; ++e) {
                double lik = 1.0;
                for (int l = 0; l < 3; ++l)
                    lik *= star[l] > 0 ? probs[e][l] : 1.0 - probs[e][l];
                if (lik > best_lik) {
                    best_lik = lik;
                    best = e;
                }
            }
            const auto w = reweight_posterior(ens, id_vec(0), star);
            CHECK(w[best] >= ens.weights[best] - 1e-12);
        }
    }
}

TEST_CASE("predictive after reweighting") {
    using testing::id_vec;
    const auto ens = testing::table_ensemble(
        2, {{{0, {0.7, 0.1}}, {1, {0.6, 0.2}}}, {{0, {0.3, 0.9}}, {1, {0.4, 0.8}}}});

    SUBCASE("prior weights reproduce the posterior predictive") {
        const auto direct = posterior_predictive(ens, id_vec(1));
        const auto via = predictive_after(ens, ens.weights, id_vec(1));
        CHECK(via == direct);
    }
    SUBCASE("a point mass selects one member") {
        const auto via = predictive_after(ens, {1.0, 0.0}, id_vec(1));
        CHECK(via[0] == doctest::Approx(0.6));
        CHECK(via[1] == doctest::Approx(0.2));
    }
    SUBCASE("random weights match the brute-force weighted sum") {
        Rng rng(515);
        for (int trial = 0; trial < 20; ++trial) {
            double w0 = rng.uniform();
            const std::vector<double> w{w0, 1.0 - w0};
            const auto got = predictive_after(ens, w, id_vec(0));
            CHECK(got[0] == doctest::Approx(w[0] * 0.7 + w[1] * 0.3).epsilon(1e-15));
            CHECK(got[1] == doctest::Approx(w[0] * 0.1 + w[1] * 0.9).epsilon(1e-15));
        }
    }
}
