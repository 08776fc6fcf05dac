/*
 * Copyright 2026 The esum Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libesum, a supervised entity summarizer for RDF entity
 * descriptions.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an esum_status; on
 * failure a human-readable message is available from esum_last_error() until
 * the next failing call on the same thread. Strings returned by accessors stay
 * valid for the lifetime of the handle they came from.
 */

#ifndef ESUM_ESUM_H_
#define ESUM_ESUM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ESUM_BUILDING_LIBRARY)
#    define ESUM_API __declspec(dllexport)
#  else
#    define ESUM_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__)
#  define ESUM_API __attribute__((visibility("default")))
#else
#  define ESUM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum esum_status {
  ESUM_OK = 0,
  ESUM_ERR_USAGE = 1,
  ESUM_ERR_MISSING_FILE = 2,
  ESUM_ERR_MALFORMED_LINE = 3,
  ESUM_ERR_EMPTY_DESCRIPTION = 4,
  ESUM_ERR_INVALID_FOLD = 5,
  ESUM_ERR_GOLD_NOT_SUBSET = 6,
  ESUM_ERR_GOLD_TOO_LARGE = 7,
  ESUM_ERR_NO_GOLD_FOR_K = 8,
  ESUM_ERR_DIM_MISMATCH = 9,
  ESUM_ERR_PARSE = 10,
  ESUM_ERR_SHAPE_MISMATCH = 11,
  ESUM_ERR_VERSION_MISMATCH = 12,
  ESUM_ERR_CORRUPT_CHECKPOINT = 13,
  ESUM_ERR_NON_FINITE_LOSS = 14,
  ESUM_ERR_LENGTH_MISMATCH = 15,
  ESUM_ERR_DEGENERATE_VARIANCE = 16,
  ESUM_ERR_EMPTY_SUMMARY = 17,
  ESUM_ERR_INVALID_MANIFEST = 18,
  ESUM_ERR_UNKNOWN_ENTITY = 19,
  ESUM_ERR_IO = 20,
  ESUM_ERR_INTERNAL = 99
} esum_status;

typedef struct esum_dataset esum_dataset;
typedef struct esum_store esum_store;
typedef struct esum_model esum_model;
typedef struct esum_report esum_report;
typedef struct esum_summary esum_summary;

ESUM_API const char *esum_version(void);
ESUM_API const char *esum_last_error(void);
/* "MissingFile", "InvalidFold", ... */
ESUM_API const char *esum_status_name(esum_status status);

/* ---- datasets ------------------------------------------------------------ */

ESUM_API esum_status esum_dataset_load(const char *manifest_path,
                                       esum_dataset **out);
/* dataset: "dbpedia", "lmdb" or "all". Gold slots k = 5 and 10. */
ESUM_API esum_status esum_dataset_load_esbm(const char *root,
                                            const char *dataset,
                                            esum_dataset **out);
ESUM_API void esum_dataset_free(esum_dataset *dataset);

ESUM_API const char *esum_dataset_name(const esum_dataset *dataset);
ESUM_API esum_status esum_dataset_counts(const esum_dataset *dataset,
                                         size_t *entities, size_t *triples,
                                         size_t *golds, size_t *folds);
/* Number of prop/val resources whose tokens all miss the store. */
ESUM_API esum_status esum_dataset_oov_resources(const esum_dataset *dataset,
                                                const esum_store *store,
                                                size_t *resources,
                                                size_t *all_oov);

/* ---- word vectors -------------------------------------------------------- */

/* vocabulary may be NULL; otherwise only words of its token vocabulary load. */
ESUM_API esum_status esum_store_load(const char *vec_path,
                                     const esum_dataset *vocabulary,
                                     esum_store **out);
ESUM_API void esum_store_free(esum_store *store);
ESUM_API size_t esum_store_dim(const esum_store *store);
ESUM_API size_t esum_store_size(const esum_store *store);

/* Writes the vectors needed by the dataset to out_path (.vec with header). */
ESUM_API esum_status esum_filter_vectors(const char *vec_path,
                                         const esum_dataset *dataset,
                                         const char *out_path,
                                         size_t *written);

/* ---- training and evaluation --------------------------------------------- */

#define ESUM_MAX_LAYERS 8

typedef enum esum_early_stop {
  ESUM_EARLY_STOP_F1 = 0,
  ESUM_EARLY_STOP_LOSS = 1
} esum_early_stop;

typedef enum esum_label_mode {
  ESUM_LABEL_FREQUENCY = 0,
  ESUM_LABEL_BINARY = 1
} esum_label_mode;

typedef struct esum_train_options {
  int k;
  int max_epochs;
  double learning_rate;
  uint64_t seed;
  esum_early_stop early_stop;
  esum_label_mode labels;
  int parallel_folds;
  size_t candidate_hidden[ESUM_MAX_LAYERS];
  size_t candidate_layers;
  size_t context_hidden[ESUM_MAX_LAYERS];
  size_t context_layers;
  size_t scorer_hidden[ESUM_MAX_LAYERS];
  size_t scorer_layers;
} esum_train_options;

/* k = 5, 50 epochs, learning rate 0.01, seed 0, F1 early stopping, frequency
 * labels, hidden layers [64,64] / [64,64] / [64,64,64]. */
ESUM_API void esum_train_options_default(esum_train_options *options);

/* Cross-validates over the dataset folds and writes fold_<i>.ckpt,
 * fold_<i>.tsv, fold_<i>.json, scores.tsv and report.json into out_dir. */
ESUM_API esum_status esum_train(const esum_dataset *dataset,
                                const esum_store *store,
                                const esum_train_options *options,
                                const char *out_dir, esum_report **out);

/* Loads fold_<i>.ckpt from checkpoint_dir and evaluates each fold's test
 * entities. out_dir may be NULL to skip writing reports. */
ESUM_API esum_status esum_evaluate(const esum_dataset *dataset,
                                   const esum_store *store, int k,
                                   const char *checkpoint_dir,
                                   const char *out_dir, esum_report **out);

/* ORACLE summaries of every fold's test entities. */
ESUM_API esum_status esum_evaluate_oracle(const esum_dataset *dataset, int k,
                                          esum_report **out);

ESUM_API void esum_report_free(esum_report *report);
ESUM_API double esum_report_mean_f1(const esum_report *report);
ESUM_API size_t esum_report_fold_count(const esum_report *report);
ESUM_API esum_status esum_report_fold(const esum_report *report, size_t i,
                                      int *fold_index, double *mean_f1,
                                      int *chosen_epoch);
ESUM_API size_t esum_report_entity_count(const esum_report *report);
ESUM_API esum_status esum_report_entity(const esum_report *report, size_t i,
                                        const char **entity_iri, double *f1);

/* Paired two-tailed t-test of per-entity F1 (a - b). */
ESUM_API esum_status esum_report_ttest(const esum_report *a,
                                       const esum_report *b, double *t,
                                       double *p, int *n);
ESUM_API esum_status esum_paired_ttest(const double *a, const double *b,
                                       size_t n, double *t, double *p);

/* ---- models and single-entity summaries ---------------------------------- */

ESUM_API esum_status esum_model_load(const char *path, esum_model **out);
ESUM_API esum_status esum_model_save(const esum_model *model, const char *path);
ESUM_API void esum_model_free(esum_model *model);
ESUM_API size_t esum_model_embed_dim(const esum_model *model);

ESUM_API esum_status esum_summarize(const esum_model *model,
                                    const esum_dataset *dataset,
                                    const esum_store *store,
                                    const char *entity_iri, int k,
                                    esum_summary **out);
ESUM_API void esum_summary_free(esum_summary *summary);
/* Number of candidate triples of the entity. */
ESUM_API size_t esum_summary_candidates(const esum_summary *summary);
/* Number of selected triples, min(k, candidates). */
ESUM_API size_t esum_summary_size(const esum_summary *summary);
/* Selected triple at rank (0 = most salient). */
ESUM_API esum_status esum_summary_item(const esum_summary *summary,
                                       size_t rank, int *triple_id,
                                       double *score);
/* N-Triples statement of a candidate; "" for an unknown id. */
ESUM_API const char *esum_summary_statement(const esum_summary *summary,
                                            int triple_id);
/* "prop: val" in textual form; "" for an unknown id. */
ESUM_API const char *esum_summary_text(const esum_summary *summary,
                                       int triple_id);
/* Attention weight of context triple context_id for candidate_id. */
ESUM_API esum_status esum_summary_attention(const esum_summary *summary,
                                            int candidate_id, int context_id,
                                            double *weight);
/* Writes entity_iri, triple_id, score, selected rows for every candidate. */
ESUM_API esum_status esum_summary_write_tsv(const esum_summary *summary,
                                            const char *path);

#ifdef __cplusplus
}
#endif

#endif /* ESUM_ESUM_H_ */
