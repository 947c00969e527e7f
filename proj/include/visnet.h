#ifndef VISNET_H
#define VISNET_H

/* C interface to the visnet library. All entry points return a status code:
 *   0  success
 *   1  invalid parameter / configuration
 *   2  malformed input file
 *   3  runtime failure (I/O, convergence, internal error)
 * On nonzero status, visnet_last_error() returns a message for the calling
 * thread, valid until the next visnet call on that thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct visnet_config visnet_config;

/* A config populated with defaults; NULL only on allocation failure. */
visnet_config* visnet_config_create(void);
void visnet_config_destroy(visnet_config* cfg);

/* Merge `key = value` lines from a file. */
int visnet_config_load(visnet_config* cfg, const char* path);

/* Set one key; unknown keys are rejected. */
int visnet_config_set(visnet_config* cfg, const char* key, const char* value);

/* Copy the current value of a key into buf (NUL-terminated, truncated to
 * buf_len). */
int visnet_config_get(const visnet_config* cfg, const char* key, char* buf, size_t buf_len);

/* Last error message for this thread ("" when the last call succeeded). */
const char* visnet_last_error(void);

/* Generate a symmetric-image dataset into out_dir (images + manifest.csv). */
int visnet_gen_data(const visnet_config* cfg, const char* out_dir);

/* Train on the configured dataset (or a gen-data directory when data_dir is
 * non-NULL/non-empty) and write the model to model_path. */
int visnet_train(const visnet_config* cfg, const char* data_dir, const char* model_path);

/* Evaluate a saved model: linear readout on the train split, accuracy on the
 * test split, artifacts in out_dir. *accuracy may be NULL. */
int visnet_eval(const visnet_config* cfg, const char* data_dir, const char* model_path,
                const char* out_dir, float* accuracy);

/* Full protocol over n_seeds seeds; writes results.csv / summary.csv / config
 * snapshot to out_dir. mean_accuracy/sd_accuracy may be NULL. */
int visnet_run(const visnet_config* cfg, const char* out_dir, float* mean_accuracy,
               float* sd_accuracy);

/* Write a receptive-field montage PGM for one layer (1-based index).
 * max_tiles <= 0 renders every neuron. */
int visnet_inspect_rf(const char* model_path, int layer, int max_tiles, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* VISNET_H */
