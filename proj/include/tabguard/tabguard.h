#ifndef TABGUARD_H
#define TABGUARD_H

/* C interface to the tabguard library: tabular classifiers with
 * adversarial privacy preservation, plus the experiment commands the
 * tabguard CLI exposes. All entry points return a status code; details for
 * the last failure on the calling thread come from tabguard_last_error().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TABGUARD_API __declspec(dllexport)
#else
#define TABGUARD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tabguard_status {
  TABGUARD_OK = 0,
  TABGUARD_ERR_INTERNAL = 1,
  TABGUARD_ERR_CONFIG = 2,
  TABGUARD_ERR_DATA = 3,
  TABGUARD_ERR_NUMERIC = 4,
  TABGUARD_ERR_CALIBRATION = 5,
  TABGUARD_ERR_PROTOCOL = 6,
  TABGUARD_ERR_INVALID_ARGUMENT = 7
} tabguard_status;

TABGUARD_API const char* tabguard_version(void);

/* Message for the most recent failure on this thread; never NULL. */
TABGUARD_API const char* tabguard_last_error(void);

/* ---------------- datasets ---------------- */

typedef struct tabguard_dataset tabguard_dataset;

/* Synthetic tabular generator: unit-variance Gaussian features with mean
 * shifts planted per protected attribute (age, gender, ethnicity order)
 * and per label. */
typedef struct tabguard_synthetic_spec {
  size_t n_rows;
  double prevalence;
  double attr_priors[3];
  double leakage_strength[3];
  double label_signal;
  uint64_t seed;
} tabguard_synthetic_spec;

TABGUARD_API void tabguard_synthetic_spec_defaults(tabguard_synthetic_spec* spec);

TABGUARD_API tabguard_status tabguard_dataset_generate(const tabguard_synthetic_spec* spec,
                                                       tabguard_dataset** out);
TABGUARD_API tabguard_status tabguard_dataset_load_csv(const char* path, tabguard_dataset** out);
TABGUARD_API tabguard_status tabguard_dataset_save_csv(const tabguard_dataset* data,
                                                       const char* path);
TABGUARD_API size_t tabguard_dataset_rows(const tabguard_dataset* data);
TABGUARD_API size_t tabguard_dataset_feature_count(void);
TABGUARD_API void tabguard_dataset_free(tabguard_dataset* data);

/* ---------------- models ---------------- */

typedef struct tabguard_model tabguard_model;

typedef enum tabguard_model_kind {
  TABGUARD_MODEL_BASE = 0,
  TABGUARD_MODEL_ADV = 1,
  TABGUARD_MODEL_ADV_PER = 2
} tabguard_model_kind;

typedef struct tabguard_train_options {
  tabguard_model_kind kind;
  double lr;
  size_t batch_size;
  size_t hidden_dim;
  size_t disc_hidden_dim;
  double dropout;
  size_t epochs;
  double lambda_;  /* gradient-reversal strength (adv) */
  double epsilon;  /* perturbation bound (adv_per) */
  double alpha;    /* clean/adversarial loss mix (adv_per) */
  uint64_t seed;
  size_t folds; /* threshold calibration CV folds */
  double recall_lo;
  double recall_hi;
  int threads;
} tabguard_train_options;

TABGUARD_API void tabguard_train_options_defaults(tabguard_train_options* opts);

/* Cross-validates on `data` to calibrate the decision threshold, then fits
 * the returned model on all rows. */
TABGUARD_API tabguard_status tabguard_model_train(const tabguard_dataset* data,
                                                  const tabguard_train_options* opts,
                                                  tabguard_model** out);

TABGUARD_API tabguard_status tabguard_model_load(const char* path, tabguard_model** out);
TABGUARD_API tabguard_status tabguard_model_save(const tabguard_model* model, const char* path);
TABGUARD_API tabguard_status tabguard_model_kind_of(const tabguard_model* model,
                                                    tabguard_model_kind* out);
TABGUARD_API tabguard_status tabguard_model_threshold(const tabguard_model* model, double* out);
TABGUARD_API tabguard_status tabguard_model_encoder_dim(const tabguard_model* model, size_t* out);

/* probs must hold tabguard_dataset_rows(data) doubles. */
TABGUARD_API tabguard_status tabguard_model_predict(const tabguard_model* model,
                                                    const tabguard_dataset* data, double* probs,
                                                    size_t probs_len);

/* out must hold rows * encoder_dim doubles; written row major. */
TABGUARD_API tabguard_status tabguard_model_encode(const tabguard_model* model,
                                                   const tabguard_dataset* data, double* out,
                                                   size_t out_len);

TABGUARD_API void tabguard_model_free(tabguard_model* model);

/* ---------------- experiment commands ---------------- */

/* NULL / zero fields fall back to the config file, which itself defaults
 * every key. config_path may name an INI config or a manifest JSON from a
 * previous run. */
typedef struct tabguard_run_options {
  const char* config_path;
  const char* out_dir;
  const uint64_t* seeds;
  size_t n_seeds;
  const char* model_kind; /* "base", "adv", or "adv_per": narrows training */
  int threads;
} tabguard_run_options;

TABGUARD_API void tabguard_run_options_defaults(tabguard_run_options* opts);

TABGUARD_API tabguard_status tabguard_cmd_gen_data(const tabguard_run_options* opts);
TABGUARD_API tabguard_status tabguard_cmd_train(const tabguard_run_options* opts);
TABGUARD_API tabguard_status tabguard_cmd_attack(const tabguard_run_options* opts);
TABGUARD_API tabguard_status tabguard_cmd_crosstest(const tabguard_run_options* opts);
TABGUARD_API tabguard_status tabguard_cmd_external(const tabguard_run_options* opts);

/* On success *out_text owns the rendered report; free it with
 * tabguard_string_free. */
TABGUARD_API tabguard_status tabguard_cmd_report(const tabguard_run_options* opts,
                                                 char** out_text);

TABGUARD_API void tabguard_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* TABGUARD_H */
