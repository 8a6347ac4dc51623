/*
 * tsbib: symbolic change-pattern features and decision-tree classification
 * for multi-metric yearly series.
 *
 * Plain C interface over opaque handles. Every call that can fail returns a
 * tsbib_status; on failure tsbib_last_error() describes the problem for the
 * calling thread until its next failing call.
 */
#ifndef TSBIB_TSBIB_H
#define TSBIB_TSBIB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TSBIB_BUILDING_LIBRARY)
#    define TSBIB_API __declspec(dllexport)
#  else
#    define TSBIB_API __declspec(dllimport)
#  endif
#else
#  define TSBIB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsbib_status {
  TSBIB_OK = 0,
  TSBIB_ERR_ARGUMENT = 1, /* null handle/pointer or bad argument */
  TSBIB_ERR_DATA = 2,     /* input file missing, malformed or invalid */
  TSBIB_ERR_CONFIG = 3,   /* unknown key or invalid configuration value */
  TSBIB_ERR_IO = 4,       /* output could not be written */
  TSBIB_ERR_INTERNAL = 5
} tsbib_status;

typedef struct tsbib_config tsbib_config;
typedef struct tsbib_dataset tsbib_dataset;

TSBIB_API const char* tsbib_version(void);
TSBIB_API const char* tsbib_last_error(void);
TSBIB_API void tsbib_string_free(char* str);

/* ---- configuration ---------------------------------------------------- */

TSBIB_API tsbib_status tsbib_config_create(tsbib_config** out);
TSBIB_API void tsbib_config_destroy(tsbib_config* config);

/* Overlays a flat JSON object file onto the configuration. */
TSBIB_API tsbib_status tsbib_config_load_file(tsbib_config* config, const char* path);

/* Sets one snake_case key, e.g. ("big_threshold", "30"). */
TSBIB_API tsbib_status tsbib_config_set(tsbib_config* config, const char* key, const char* value);

/* Effective configuration as JSON. Free with tsbib_string_free. */
TSBIB_API tsbib_status tsbib_config_to_json(const tsbib_config* config, char** out_json);

/* ---- datasets --------------------------------------------------------- */

typedef struct tsbib_dataset_summary {
  size_t observations;
  size_t entities;
  size_t true_entities;
  size_t false_entities;
  size_t skipped_unlabeled;
  int window_length;
} tsbib_dataset_summary;

/* Loads observation and label CSVs and aligns them into a cohort using the
 * configuration's window_length and default_false_anchor. */
TSBIB_API tsbib_status tsbib_dataset_load(const tsbib_config* config, const char* observations_path,
                                          const char* labels_path, tsbib_dataset** out);
TSBIB_API void tsbib_dataset_destroy(tsbib_dataset* dataset);
TSBIB_API tsbib_status tsbib_dataset_summarize(const tsbib_dataset* dataset, tsbib_dataset_summary* out);

/* ---- pipeline --------------------------------------------------------- */

/* Writes the feature space and matrix (whole-cohort selection) as JSON.
 * feature_space_path may be NULL; otherwise its "patterns" list is used
 * instead of selecting. */
TSBIB_API tsbib_status tsbib_featurize(const tsbib_dataset* dataset, const tsbib_config* config,
                                       const char* feature_space_path, const char* features_out_path);

/* Cross-validates the quantity baseline and the combined configuration and
 * writes <out_dir>/report.json and <out_dir>/report.md. */
TSBIB_API tsbib_status tsbib_evaluate(const tsbib_dataset* dataset, const tsbib_config* config,
                                      const char* out_dir);

/* Writes the tree trained on the whole cohort as JSON. */
TSBIB_API tsbib_status tsbib_export_tree(const tsbib_dataset* dataset, const tsbib_config* config,
                                         const char* tree_out_path);

/* ---- synthetic cohorts ------------------------------------------------ */

typedef struct tsbib_synth_params {
  int n_true;
  int n_false;
  int window_length;
  int plant;               /* 0 disables the plant */
  const char* metric;      /* metric token, e.g. "international_papers" */
  const char* shape;       /* e.g. "Uu" */
  int years_before_anchor;
  double noise;
  uint64_t seed;
  int false_anchor_year;
} tsbib_synth_params;

TSBIB_API void tsbib_synth_params_init(tsbib_synth_params* params);

/* Writes <out_dir>/observations.csv and <out_dir>/labels.csv. */
TSBIB_API tsbib_status tsbib_synth_write(const tsbib_synth_params* params, const char* out_dir);

/* ---- primitives ------------------------------------------------------- */

/* Symbolizes n raw values into out (n - 1 symbols plus a terminating NUL;
 * out_capacity must be >= n). */
TSBIB_API tsbib_status tsbib_symbolize(const double* raw, size_t n, double big_threshold, double small_threshold,
                                       char* out, size_t out_capacity);

TSBIB_API tsbib_status tsbib_chi_squared_2x2(int a_correct, int a_incorrect, int b_correct, int b_incorrect,
                                             int yates, double* statistic, double* p_value);

#ifdef __cplusplus
}
#endif

#endif /* TSBIB_TSBIB_H */
