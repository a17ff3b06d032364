/* Copyright 2026 The kcpm Authors
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

/* C interface to libkcpm.
 *
 * Every fallible call returns a kcpm_status. On failure the message is
 * available from kcpm_last_error() on the calling thread until the next
 * call. Strings returned through `char**` are owned by the caller and must be
 * released with kcpm_string_free(). Handles are released with their _free
 * function; passing NULL to any _free function is a no-op.
 */

#ifndef KCPM_KCPM_H_
#define KCPM_KCPM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(KCPM_BUILDING_LIBRARY)
#define KCPM_API __attribute__((visibility("default")))
#else
#define KCPM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kcpm_status {
  KCPM_OK = 0,
  KCPM_ERR_ARGUMENT = 1, /* NULL handle, out-of-range parameter */
  KCPM_ERR_PARSE = 2,    /* malformed input file */
  KCPM_ERR_DATA = 3,     /* input violates a precondition */
  KCPM_ERR_CONFIG = 4,   /* invalid settings */
  KCPM_ERR_IO = 5,       /* file cannot be opened or written */
  KCPM_ERR_INTERNAL = 6
} kcpm_status;

typedef struct kcpm_log kcpm_log;
typedef struct kcpm_kg kcpm_kg;
typedef struct kcpm_alias kcpm_alias;
typedef struct kcpm_rules kcpm_rules;
typedef struct kcpm_dfg kcpm_dfg;
typedef struct kcpm_scorer kcpm_scorer;
typedef struct kcpm_lpg kcpm_lpg;
typedef struct kcpm_variant_model kcpm_variant_model;
typedef struct kcpm_synth_model kcpm_synth_model;

KCPM_API const char* kcpm_version(void);
KCPM_API const char* kcpm_last_error(void);
KCPM_API const char* kcpm_status_name(kcpm_status status);
KCPM_API void kcpm_string_free(char* s);
/* Worker threads for parallel stages; the library starts with 1. Passing 0
 * reads KCPM_THREADS, falling back to the hardware concurrency. */
KCPM_API void kcpm_set_threads(unsigned n);
KCPM_API unsigned kcpm_threads(void);

/* Event logs ------------------------------------------------------------- */

/* skip_malformed: drop events lacking name or timestamp instead of failing. */
KCPM_API kcpm_status kcpm_log_read_xes(const char* path, int skip_malformed, kcpm_log** out);
/* mapping_json may be NULL; keys: case_id, activity, timestamp, resource,
 * timestamp_format, delimiter, attribute_columns. */
KCPM_API kcpm_status kcpm_log_read_csv(const char* path, const char* mapping_json, kcpm_log** out);
/* Picks the reader from the extension (.xes or .csv). */
KCPM_API kcpm_status kcpm_log_read(const char* path, kcpm_log** out);
KCPM_API kcpm_status kcpm_log_write_xes(const kcpm_log* log, const char* path);
KCPM_API kcpm_status kcpm_log_write_csv(const kcpm_log* log, const char* path);
KCPM_API kcpm_status kcpm_log_annotate(const kcpm_log* log, const char* context_csv_path, kcpm_log** out,
                                       char** report_json);
KCPM_API kcpm_status kcpm_log_stats_json(const kcpm_log* log, char** out);
KCPM_API size_t kcpm_log_case_count(const kcpm_log* log);
KCPM_API size_t kcpm_log_event_count(const kcpm_log* log);
KCPM_API void kcpm_log_free(kcpm_log* log);

/* Knowledge graph -------------------------------------------------------- */

/* `.nt` files are read as N-Triples, anything else as TSV. */
KCPM_API kcpm_status kcpm_kg_read(const char* path, kcpm_kg** out);
KCPM_API kcpm_status kcpm_kg_empty(kcpm_kg** out);
KCPM_API size_t kcpm_kg_triple_count(const kcpm_kg* kg);
KCPM_API void kcpm_kg_free(kcpm_kg* kg);

KCPM_API kcpm_status kcpm_alias_read(const char* path, kcpm_alias** out);
KCPM_API void kcpm_alias_free(kcpm_alias* alias);

/* Rules ------------------------------------------------------------------ */

KCPM_API kcpm_status kcpm_rules_mine(const kcpm_kg* kg, int max_body_length, uint64_t min_support,
                                     double min_pca_confidence, kcpm_rules** out);
KCPM_API kcpm_status kcpm_rules_empty(kcpm_rules** out);
KCPM_API kcpm_status kcpm_rules_read(const char* path, kcpm_rules** out);
KCPM_API kcpm_status kcpm_rules_write(const kcpm_rules* rules, const char* path);
KCPM_API kcpm_status kcpm_rules_text(const kcpm_rules* rules, char** out);
/* Rules of `first` win on equal ids. */
KCPM_API kcpm_status kcpm_rules_merge(const kcpm_rules* first, const kcpm_rules* second, kcpm_rules** out);
KCPM_API size_t kcpm_rules_count(const kcpm_rules* rules);
KCPM_API kcpm_status kcpm_entails(const kcpm_rules* rules, const kcpm_kg* kg, const char* subject,
                                  const char* predicate, const char* object, int* entailed, double* confidence);
KCPM_API void kcpm_rules_free(kcpm_rules* rules);

/* Dependency graphs ------------------------------------------------------ */

typedef struct kcpm_mining_thresholds {
  double dependency_threshold;
  uint64_t frequency_threshold;
  int all_tasks_connected;
  /* Negative disables long-distance mining. */
  double long_distance_threshold;
} kcpm_mining_thresholds;

KCPM_API void kcpm_mining_thresholds_default(kcpm_mining_thresholds* t);
KCPM_API kcpm_status kcpm_dfg_mine(const kcpm_log* log, const kcpm_mining_thresholds* t, kcpm_dfg** out);
KCPM_API kcpm_status kcpm_dfg_read_json(const char* path, kcpm_dfg** out);
KCPM_API kcpm_status kcpm_dfg_to_json(const kcpm_dfg* dfg, char** out);
KCPM_API kcpm_status kcpm_dfg_to_dot(const kcpm_dfg* dfg, char** out);
KCPM_API size_t kcpm_dfg_edge_count(const kcpm_dfg* dfg);

typedef enum kcpm_filter_mode { KCPM_FILTER_STRICT = 0, KCPM_FILTER_PERMISSIVE = 1 } kcpm_filter_mode;

/* alias may be NULL. report_json may be NULL. */
KCPM_API kcpm_status kcpm_dfg_filter(const kcpm_dfg* dfg, const kcpm_rules* rules, const kcpm_kg* kg,
                                     const kcpm_alias* alias, kcpm_filter_mode mode, kcpm_dfg** out,
                                     char** report_json);
KCPM_API kcpm_status kcpm_dfg_filter_table(const kcpm_dfg* dfg, const kcpm_rules* rules, const kcpm_kg* kg,
                                           const kcpm_alias* alias, kcpm_filter_mode mode, char** table);
KCPM_API void kcpm_dfg_free(kcpm_dfg* dfg);

/* Augmentation ----------------------------------------------------------- */

KCPM_API kcpm_status kcpm_filter_chaotic(const kcpm_log* log, const kcpm_rules* rules, const kcpm_kg* kg,
                                         const kcpm_alias* alias, int strict_ordering, kcpm_log** out,
                                         char** report_json);

typedef struct kcpm_scorer_params {
  int dimension;
  double margin;
  double learning_rate;
  int epochs;
  int negatives;
  uint64_t seed;
  int time_buckets;
} kcpm_scorer_params;

KCPM_API void kcpm_scorer_params_default(kcpm_scorer_params* p);
/* kg may be NULL. */
KCPM_API kcpm_status kcpm_scorer_train(const kcpm_log* log, const kcpm_kg* kg, const kcpm_scorer_params* p,
                                       kcpm_scorer** out);
KCPM_API kcpm_status kcpm_scorer_save(const kcpm_scorer* s, const char* path);
KCPM_API kcpm_status kcpm_scorer_load(const char* path, kcpm_scorer** out);
/* timestamp is ISO-8601. */
KCPM_API kcpm_status kcpm_scorer_degree(const kcpm_scorer* s, const char* a, const char* b, const char* timestamp,
                                        double* degree);
KCPM_API void kcpm_scorer_free(kcpm_scorer* s);

/* scorer and alias may be NULL. */
KCPM_API kcpm_status kcpm_infer_missing(const kcpm_log* log, const kcpm_rules* rules, const kcpm_kg* kg,
                                        const kcpm_scorer* scorer, double theta, const kcpm_alias* alias,
                                        kcpm_log** out, char** report_json);
KCPM_API kcpm_status kcpm_guideline_latency(const kcpm_log* log, const char* from, const char* to,
                                            int64_t limit_ms, double* fraction);

/* Labeled property graph and variants ----------------------------------- */

/* kg and alias may be NULL; attribute_keys names event attributes promoted
 * to nodes. */
KCPM_API kcpm_status kcpm_lpg_build(const kcpm_log* log, const kcpm_kg* kg, const kcpm_alias* alias,
                                    const char* const* attribute_keys, size_t n_keys, kcpm_lpg** out);
/* format: "graphml", "dot", "nodes-csv" or "edges-csv". */
KCPM_API kcpm_status kcpm_lpg_export(const kcpm_lpg* g, const char* format, char** out);
KCPM_API size_t kcpm_lpg_node_count(const kcpm_lpg* g);
KCPM_API size_t kcpm_lpg_edge_count(const kcpm_lpg* g);
KCPM_API void kcpm_lpg_free(kcpm_lpg* g);

typedef struct kcpm_variant_params {
  int dimension;
  double margin;
  double learning_rate;
  int epochs;
  int negatives;
  uint64_t seed;
  double classification_weight;
} kcpm_variant_params;

KCPM_API void kcpm_variant_params_default(kcpm_variant_params* p);
KCPM_API kcpm_status kcpm_variant_train(const kcpm_lpg* g, const char* labels_csv_path,
                                        const kcpm_variant_params* p, kcpm_variant_model** out);
KCPM_API kcpm_status kcpm_variant_save(const kcpm_variant_model* m, const char* path);
KCPM_API kcpm_status kcpm_variant_load(const char* path, kcpm_variant_model** out);
/* Scores of one case as a JSON object class -> probability. */
KCPM_API kcpm_status kcpm_variant_score(const kcpm_variant_model* m, const kcpm_lpg* g, const char* case_id,
                                        char** json);
/* Partition of every case of `log`; either output may be NULL. */
KCPM_API kcpm_status kcpm_variant_classify(const kcpm_variant_model* m, const kcpm_lpg* g, const kcpm_log* log,
                                           char** partition_json, char** partition_csv);
KCPM_API void kcpm_variant_free(kcpm_variant_model* m);

/* Conformance ------------------------------------------------------------ */

KCPM_API kcpm_status kcpm_conformance(const kcpm_log* log, const kcpm_dfg* model, char** report_json);
KCPM_API kcpm_status kcpm_conformance_values(const kcpm_log* log, const kcpm_dfg* model, double* fitness,
                                             double* precision, double* f_score);
KCPM_API double kcpm_f_score(double fitness, double precision);
/* `Event Log Type | Fitness | Precision | F-Score` rows. */
KCPM_API kcpm_status kcpm_conformance_table(size_t n_rows, const char* const* labels, const double* fitness,
                                            const double* precision, char** table);
/* csv != 0 selects CSV instead of an aligned table. */
KCPM_API kcpm_status kcpm_footprint_log(const kcpm_log* log, int csv, char** out);
KCPM_API kcpm_status kcpm_footprint_dfg(const kcpm_dfg* dfg, int csv, char** out);

/* Synthetic data --------------------------------------------------------- */

KCPM_API kcpm_status kcpm_synth_model_read(const char* path, kcpm_synth_model** out);
KCPM_API kcpm_status kcpm_synth_model_dfg(const kcpm_synth_model* m, kcpm_dfg** out);
KCPM_API kcpm_status kcpm_synth_simulate(const kcpm_synth_model* m, size_t n_cases, uint64_t seed,
                                         kcpm_log** out);
KCPM_API kcpm_status kcpm_synth_corrupt(const kcpm_log* log, double drop_rate, double noise_rate,
                                        const char* const* noise_alphabet, size_t n_noise, uint64_t seed,
                                        kcpm_log** out);
KCPM_API void kcpm_synth_model_free(kcpm_synth_model* m);

#ifdef __cplusplus
}
#endif

#endif /* KCPM_KCPM_H_ */
