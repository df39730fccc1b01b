/* C interface to the CRAB multi-label active-learning engine.
 *
 * All functions return crab_status; CRAB_OK means success. On failure a
 * human-readable message is available from crab_last_error() until the next
 * failing call on the same thread. Objects returned through out-pointers are
 * owned by the caller and released with the matching *_free function.
 */
#ifndef CRAB_H
#define CRAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CRAB_API __declspec(dllexport)
#else
#define CRAB_API __attribute__((visibility("default")))
#endif

typedef enum crab_status {
    CRAB_OK = 0,
    CRAB_ERR_IO = 1,
    CRAB_ERR_PARSE = 2,
    CRAB_ERR_CONFIG = 3,
    CRAB_ERR_DOMAIN = 4,
    CRAB_ERR_DIMENSION = 5,
    CRAB_ERR_INVALID_QUERY = 6,
    CRAB_ERR_TRAINING = 7,
    CRAB_ERR_TARGET = 8,
    CRAB_ERR_RUNTIME = 9
} crab_status;

typedef struct crab_dataset crab_dataset; /* immutable multi-label dataset */
typedef struct crab_config crab_config;   /* experiment configuration */

CRAB_API const char* crab_version(void);
CRAB_API const char* crab_status_name(crab_status status);

/* Message for the most recent failure on this thread ("" if none). */
CRAB_API const char* crab_last_error(void);

/* ---- datasets -------------------------------------------------------- */

CRAB_API crab_status crab_dataset_load(const char* path, crab_dataset** out);
CRAB_API crab_status crab_dataset_save(const crab_dataset* ds, const char* path);
CRAB_API void crab_dataset_free(crab_dataset* ds);

CRAB_API size_t crab_dataset_size(const crab_dataset* ds);
CRAB_API int crab_dataset_num_labels(const crab_dataset* ds);
CRAB_API size_t crab_dataset_feature_dim(const crab_dataset* ds);

/* MeanIR of the dataset labels; *warned (optional) is set nonzero when a
 * label without positive instances had to be excluded. */
CRAB_API crab_status crab_dataset_mean_ir(const crab_dataset* ds, double* out, int* warned);

/* CorrAvg of the positive correlation matrix built from all labels. */
CRAB_API crab_status crab_dataset_corr_avg(const crab_dataset* ds, double* out);

/* ---- synthetic data --------------------------------------------------- */

/* Subsample base until its MeanIR is within tolerance of target. */
CRAB_API crab_status crab_synth_subsample(const crab_dataset* base, double target_ir,
                                          double tolerance, uint64_t seed,
                                          crab_dataset** out);

/* Latent-factor generator; target_ir <= 0 keeps the raw imbalance. */
CRAB_API crab_status crab_synth_generate(size_t instances, int labels, size_t feature_dim,
                                         double target_ir, double tolerance, uint64_t seed,
                                         crab_dataset** out);

/* ---- scoring primitives ----------------------------------------------- */

/* Unnormalized lower incomplete beta B(x;a,b), a,b > 0. */
CRAB_API crab_status crab_incomplete_beta(double x, double a, double b, double* out);

/* Beta-family partial loss: positive-label loss when label_is_positive is
 * nonzero, negative-label loss otherwise. May return +inf at the divergent
 * endpoint of the log-loss limits. */
CRAB_API crab_status crab_partial_loss(int label_is_positive, double p, double alpha,
                                       double beta, double* out);

/* ---- configuration and experiments ------------------------------------ */

CRAB_API crab_config* crab_config_new(void);
CRAB_API crab_status crab_config_load(const char* path, crab_config** out);
CRAB_API crab_status crab_config_set(crab_config* cfg, const char* key, const char* value);
CRAB_API void crab_config_free(crab_config* cfg);

/* Runs the configured campaign and writes results/summary/trends CSVs into
 * the configured output directory. Returns CRAB_ERR_RUNTIME if any seed
 * aborted (the remaining seeds still run and are written). */
CRAB_API crab_status crab_run_experiment(const crab_config* cfg);

/* Renders figure families from CSV outputs in in_dir into out_dir
 * (out_dir NULL = in_dir). */
CRAB_API crab_status crab_emit_plots(const char* in_dir, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* CRAB_H */
