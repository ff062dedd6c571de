/*  Copyright 2026 xlign authors. All Rights Reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

/* C interface to the xlign shared library. All objects are opaque
 * handles; every fallible call returns a status code and leaves a
 * message readable through xlign_last_error() (thread-local). Strings
 * returned through char** out-parameters are heap copies; release them
 * with xlign_string_free.
 */

#ifndef XLIGN_XLIGN_H
#define XLIGN_XLIGN_H

#ifdef __cplusplus
extern "C" {
#endif

#define XLIGN_API __attribute__((visibility("default")))

typedef enum xlign_status {
  XLIGN_OK = 0,
  XLIGN_E_USAGE = 1,   /* bad arguments or configuration */
  XLIGN_E_DATA = 2,    /* malformed or inconsistent input data */
  XLIGN_E_NUMERIC = 3, /* numerical failure */
  XLIGN_E_IO = 4       /* file system problem */
} xlign_status;

typedef struct xlign_space xlign_space;
typedef struct xlign_dictionary xlign_dictionary;
typedef struct xlign_map xlign_map;
typedef struct xlign_norm_report xlign_norm_report;
typedef struct xlign_eval_report xlign_eval_report;

XLIGN_API const char* xlign_version(void);
XLIGN_API const char* xlign_last_error(void);
XLIGN_API void xlign_string_free(char* s);

/* ---- embedding spaces (fastText .vec text format) ---- */

/* max_vocab > 0 keeps only the first max_vocab words. */
XLIGN_API xlign_status xlign_space_read_vec(const char* path, long max_vocab,
                                            xlign_space** out);
XLIGN_API xlign_status xlign_space_write_vec(const xlign_space* space,
                                             const char* path);
XLIGN_API void xlign_space_free(xlign_space* space);
XLIGN_API long xlign_space_dim(const xlign_space* space);
XLIGN_API long xlign_space_size(const xlign_space* space);
/* NULL when index is out of range; pointer valid while the space lives. */
XLIGN_API const char* xlign_space_word(const xlign_space* space, long index);
/* -1 when the word is absent. */
XLIGN_API long xlign_space_index(const xlign_space* space, const char* word);

/* ---- normalization (mutates the space) ---- */

/* method: "none" | "cl" | "iternorm". report_out may be NULL; a report
 * is produced only for iternorm. */
XLIGN_API xlign_status xlign_space_normalize(xlign_space* space,
                                             const char* method, int rounds,
                                             double tolerance, int perturb_zeros,
                                             xlign_norm_report** report_out);
XLIGN_API xlign_status xlign_space_residuals(const xlign_space* space,
                                             double* max_length_residual,
                                             double* mean_norm_residual,
                                             double* min_column_length);
XLIGN_API double xlign_space_mean_vector_length(const xlign_space* space);

XLIGN_API void xlign_norm_report_free(xlign_norm_report* report);
XLIGN_API int xlign_norm_report_converged(const xlign_norm_report* report);
XLIGN_API long xlign_norm_report_rounds(const xlign_norm_report* report);
XLIGN_API xlign_status xlign_norm_report_round(
    const xlign_norm_report* report, long index, double* max_length_residual,
    double* mean_norm_residual, double* iterate_delta,
    double* min_column_length);
XLIGN_API xlign_status xlign_norm_report_json(const xlign_norm_report* report,
                                              char** json_out);

/* ---- dictionaries ("source target" lines) ---- */

XLIGN_API xlign_status xlign_dictionary_read(const char* path,
                                             const xlign_space* src,
                                             const xlign_space* tgt,
                                             xlign_dictionary** out);
XLIGN_API void xlign_dictionary_free(xlign_dictionary* dict);
XLIGN_API long xlign_dictionary_pairs(const xlign_dictionary* dict);
XLIGN_API long xlign_dictionary_skipped(const xlign_dictionary* dict);

/* ---- linear maps ---- */

XLIGN_API xlign_status xlign_map_read(const char* path, xlign_map** out);
XLIGN_API xlign_status xlign_map_write(const xlign_map* map, const char* path);
XLIGN_API void xlign_map_free(xlign_map* map);
XLIGN_API long xlign_map_dim(const xlign_map* map);
XLIGN_API int xlign_map_orthogonal(const xlign_map* map);
XLIGN_API double xlign_map_orthogonality_residual(const xlign_map* map);

/* ---- fitting ---- */

XLIGN_API xlign_status xlign_fit_procrustes(const xlign_space* src,
                                            const xlign_space* tgt,
                                            const xlign_dictionary* train,
                                            xlign_map** out);
XLIGN_API xlign_status xlign_fit_refine(const xlign_space* src,
                                        const xlign_space* tgt,
                                        const xlign_dictionary* train,
                                        int steps, int synthetic_pool, int knn,
                                        xlign_map** out);
/* Grids are comma-separated ("1,10,25,50"); NULL keeps the defaults.
 * valid may be NULL (a seeded holdout is split off the training pairs).
 * chosen_lr / chosen_epochs may be NULL. */
XLIGN_API xlign_status xlign_fit_rcsls(
    const xlign_space* src, const xlign_space* tgt,
    const xlign_dictionary* train, const xlign_dictionary* valid,
    const char* lr_grid, const char* epoch_grid, int knn, int neighbor_pool,
    int batch_size, int holdout, unsigned long long seed, double* chosen_lr,
    int* chosen_epochs, xlign_map** out);

/* ---- retrieval and evaluation ---- */

/* criterion: "nn" | "csls". penalty_pool 0 = full vocabulary. Fills
 * target_indices_out[n_queries * topk] (padded with -1 when fewer than
 * topk targets exist) and, when non-NULL, scores_out of the same size. */
XLIGN_API xlign_status xlign_translate(const xlign_map* map,
                                       const xlign_space* src,
                                       const xlign_space* tgt,
                                       const long* query_indices, long n_queries,
                                       const char* criterion, int knn, int topk,
                                       int penalty_pool, long* target_indices_out,
                                       double* scores_out);

XLIGN_API xlign_status xlign_evaluate(const xlign_map* map,
                                      const xlign_space* src,
                                      const xlign_space* tgt,
                                      const xlign_dictionary* test,
                                      const char* criterion, int knn,
                                      int penalty_pool, xlign_eval_report** out);
XLIGN_API void xlign_eval_report_free(xlign_eval_report* report);
XLIGN_API double xlign_eval_report_accuracy(const xlign_eval_report* report);
XLIGN_API long xlign_eval_report_queries(const xlign_eval_report* report);
XLIGN_API long xlign_eval_report_correct(const xlign_eval_report* report);
XLIGN_API xlign_status xlign_eval_report_json(const xlign_eval_report* report,
                                              char** json_out);

/* Top-k cosine neighbors of a word inside its own space (the word itself
 * excluded). Fills up to k entries; *found_out reports how many. */
XLIGN_API xlign_status xlign_neighbors(const xlign_space* space,
                                       const char* word, int k,
                                       long* indices_out, double* cosines_out,
                                       long* found_out);

/* Spearman correlation against a "word_a word_b score" dataset file. */
XLIGN_API xlign_status xlign_wordsim(const xlign_space* space,
                                     const char* dataset_path, double* rho_out,
                                     long* covered_out, long* skipped_out);

/* ---- synthetic worlds and pipelines ---- */

/* Writes src.vec, tgt.vec, train.txt, test.txt and rotation.map under
 * out_dir. Deterministic in seed. */
XLIGN_API xlign_status xlign_synth_write(long n, long d, double noise_sigma,
                                         double offset_norm, double scale_min,
                                         double scale_max, double spectrum_decay,
                                         long train_pairs, long test_pairs,
                                         unsigned long long seed,
                                         const char* out_dir);

typedef struct xlign_pipeline_config {
  const char* src_path;
  const char* tgt_path;
  const char* train_dict_path;
  const char* test_dict_path;
  const char* valid_dict_path; /* NULL or "" = none (rcsls only) */
  const char* normalization;   /* none | cl | iternorm */
  int norm_rounds;
  double norm_tolerance;
  int perturb_zeros;
  const char* method; /* procrustes | procrustes-refine | rcsls */
  int refine_steps;
  int refine_pool;
  const char* rcsls_lr_grid;    /* NULL = default */
  const char* rcsls_epoch_grid; /* NULL = default */
  int rcsls_neighbor_pool;
  int rcsls_batch_size;
  int rcsls_holdout;
  int knn;               /* CSLS neighborhood size throughout */
  const char* criterion; /* nn | csls */
  int penalty_pool;
  unsigned long long seed;
  long max_vocab;
  const char* out_dir;
  const char* tag;
} xlign_pipeline_config;

XLIGN_API void xlign_pipeline_config_init(xlign_pipeline_config* cfg);
XLIGN_API xlign_status xlign_run_pipeline(const xlign_pipeline_config* cfg,
                                          double* accuracy_out);

/* Renders run.json records into the accuracy table (rows: method x
 * normalization, columns: tags) and/or machine-readable CSV. */
XLIGN_API xlign_status xlign_emit_table(const char* const* record_paths,
                                        long n_records, char** table_out,
                                        char** csv_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* XLIGN_XLIGN_H */
