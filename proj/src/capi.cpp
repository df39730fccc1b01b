#include "crab/crab.h"

#include <string>

#include "crab/config.hpp"
#include "crab/correlation.hpp"
#include "crab/dataset.hpp"
#include "crab/error.hpp"
#include "crab/experiment.hpp"
#include "crab/metrics.hpp"
#include "crab/plots.hpp"
#include "crab/scoring.hpp"
#include "crab/synth.hpp"

struct crab_dataset {
    crab::MultiLabelDataset data;
};

struct crab_config {
    crab::ExperimentConfig data;
};

namespace {

thread_local std::string g_last_error;

crab_status fail(crab_status status, const char* what) {
    g_last_error = what;
    return status;
}

// Every API body funnels through here so exception-to-status mapping lives in
// one place.
template <typename Fn>
crab_status guarded(Fn&& fn) {
    try {
        fn();
        return CRAB_OK;
    } catch (const crab::IoError& e) {
        return fail(CRAB_ERR_IO, e.what());
    } catch (const crab::ParseError& e) {
        return fail(CRAB_ERR_PARSE, e.what());
    } catch (const crab::ConfigError& e) {
        return fail(CRAB_ERR_CONFIG, e.what());
    } catch (const crab::DomainError& e) {
        return fail(CRAB_ERR_DOMAIN, e.what());
    } catch (const crab::DimensionError& e) {
        return fail(CRAB_ERR_DIMENSION, e.what());
    } catch (const crab::InvalidQueryError& e) {
        return fail(CRAB_ERR_INVALID_QUERY, e.what());
    } catch (const crab::TrainingError& e) {
        return fail(CRAB_ERR_TRAINING, e.what());
    } catch (const crab::TargetError& e) {
        return fail(CRAB_ERR_TARGET, e.what());
    } catch (const std::exception& e) {
        return fail(CRAB_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(CRAB_ERR_RUNTIME, "unknown error");
    }
}

crab_status require(bool ok, const char* what) {
    return ok ? CRAB_OK : fail(CRAB_ERR_CONFIG, what);
}

} // namespace

extern "C" {

const char* crab_version(void) { return "0.1.0"; }

const char* crab_status_name(crab_status status) {
    switch (status) {
        case CRAB_OK: return "ok";
        case CRAB_ERR_IO: return "io";
        case CRAB_ERR_PARSE: return "parse";
        case CRAB_ERR_CONFIG: return "config";
        case CRAB_ERR_DOMAIN: return "domain";
        case CRAB_ERR_DIMENSION: return "dimension";
        case CRAB_ERR_INVALID_QUERY: return "invalid-query";
        case CRAB_ERR_TRAINING: return "training";
        case CRAB_ERR_TARGET: return "target";
        case CRAB_ERR_RUNTIME: return "runtime";
    }
    return "?";
}

const char* crab_last_error(void) { return g_last_error.c_str(); }

crab_status crab_dataset_load(const char* path, crab_dataset** out) {
    if (crab_status s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new crab_dataset{crab::load_dataset(path)}; });
}

crab_status crab_dataset_save(const crab_dataset* ds, const char* path) {
    if (crab_status s = require(ds && path, "null argument")) return s;
    return guarded([&] { crab::save_dataset(ds->data, path); });
}

void crab_dataset_free(crab_dataset* ds) { delete ds; }

size_t crab_dataset_size(const crab_dataset* ds) { return ds ? ds->data.size() : 0; }

int crab_dataset_num_labels(const crab_dataset* ds) {
    return ds ? ds->data.num_labels : 0;
}

size_t crab_dataset_feature_dim(const crab_dataset* ds) {
    return ds ? ds->data.feature_dim : 0;
}

crab_status crab_dataset_mean_ir(const crab_dataset* ds, double* out, int* warned) {
    if (crab_status s = require(ds && out, "null argument")) return s;
    return guarded([&] {
        bool w = false;
        *out = crab::mean_ir(ds->data.label_matrix(), &w);
        if (warned) *warned = w ? 1 : 0;
    });
}

crab_status crab_dataset_corr_avg(const crab_dataset* ds, double* out) {
    if (crab_status s = require(ds && out, "null argument")) return s;
    return guarded([&] {
        const auto matrices =
            crab::build_matrices(ds->data.label_matrix(), ds->data.num_labels);
        *out = crab::corr_avg(matrices.positive());
    });
}

crab_status crab_synth_subsample(const crab_dataset* base, double target_ir,
                                 double tolerance, uint64_t seed, crab_dataset** out) {
    if (crab_status s = require(base && out, "null argument")) return s;
    return guarded([&] {
        *out = new crab_dataset{
            crab::subsample_to_mean_ir(base->data, target_ir, tolerance, seed)};
    });
}

crab_status crab_synth_generate(size_t instances, int labels, size_t feature_dim,
                                double target_ir, double tolerance, uint64_t seed,
                                crab_dataset** out) {
    if (crab_status s = require(out != nullptr, "null argument")) return s;
    return guarded([&] {
        crab::SyntheticGenConfig cfg;
        cfg.instances = instances;
        cfg.labels = labels;
        cfg.feature_dim = feature_dim;
        cfg.target_mean_ir = target_ir;
        cfg.tolerance = tolerance;
        cfg.seed = seed;
        *out = new crab_dataset{crab::generate_synthetic(cfg)};
    });
}

crab_status crab_incomplete_beta(double x, double a, double b, double* out) {
    if (crab_status s = require(out != nullptr, "null argument")) return s;
    return guarded([&] { *out = crab::incomplete_beta(x, a, b); });
}

crab_status crab_partial_loss(int label_is_positive, double p, double alpha, double beta,
                              double* out) {
    if (crab_status s = require(out != nullptr, "null argument")) return s;
    return guarded([&] {
        const crab::BetaParams params(alpha, beta);
        *out = label_is_positive ? crab::partial_loss_pos(p, params)
                                 : crab::partial_loss_neg(p, params);
    });
}

crab_config* crab_config_new(void) { return new crab_config{}; }

crab_status crab_config_load(const char* path, crab_config** out) {
    if (crab_status s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new crab_config{crab::load_config(path)}; });
}

crab_status crab_config_set(crab_config* cfg, const char* key, const char* value) {
    if (crab_status s = require(cfg && key && value, "null argument")) return s;
    return guarded([&] { crab::set_config_key(cfg->data, key, value); });
}

void crab_config_free(crab_config* cfg) { delete cfg; }

crab_status crab_run_experiment(const crab_config* cfg) {
    if (crab_status s = require(cfg != nullptr, "null argument")) return s;
    bool all_ok = true;
    std::string first_error;
    const crab_status status = guarded([&] {
        const crab::ExperimentResults results = crab::run_experiment(cfg->data);
        all_ok = results.all_ok();
        for (const auto& o : results.outcomes)
            if (!o.ok && first_error.empty())
                first_error = "seed " + std::to_string(o.seed) + ": " + o.error;
    });
    if (status != CRAB_OK) return status;
    if (!all_ok) return fail(CRAB_ERR_RUNTIME, first_error.c_str());
    return CRAB_OK;
}

crab_status crab_emit_plots(const char* in_dir, const char* out_dir) {
    if (crab_status s = require(in_dir != nullptr, "null argument")) return s;
    return guarded([&] { crab::emit_plots(in_dir, out_dir ? out_dir : in_dir); });
}

} // extern "C"
