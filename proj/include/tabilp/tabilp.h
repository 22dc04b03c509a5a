/* Copyright 2026 The tabilp Authors
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

/* C interface to the table-reasoning engine.
 *
 * Handles are opaque and immutable once created, so one handle may be used
 * from several threads at once. Every fallible call returns a status; on
 * failure tabilp_last_error() holds a message for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * tabilp_string_free(). Output pointers are left untouched on failure.
 */

#ifndef TABILP_TABILP_H
#define TABILP_TABILP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TABILP_API __declspec(dllexport)
#else
#define TABILP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  TABILP_OK = 0,
  TABILP_INVALID_ARGUMENT = 1,
  TABILP_IO_ERROR = 2,
  TABILP_PARSE_ERROR = 3,
  TABILP_INTERNAL_ERROR = 4
} tabilp_status;

typedef enum {
  TABILP_SOLVE_OPTIMAL = 0,
  TABILP_SOLVE_INFEASIBLE = 1,
  TABILP_SOLVE_TIMEOUT = 2
} tabilp_solve_status;

typedef struct tabilp_tables tabilp_tables;
typedef struct tabilp_questions tabilp_questions;
typedef struct tabilp_config tabilp_config;
typedef struct tabilp_corpus tabilp_corpus;
typedef struct tabilp_ir tabilp_ir;
typedef struct tabilp_scorer tabilp_scorer;
typedef struct tabilp_problem tabilp_problem;
typedef struct tabilp_combiner tabilp_combiner;

TABILP_API const char* tabilp_version(void);
TABILP_API const char* tabilp_last_error(void);
TABILP_API void tabilp_string_free(char* s);

/* Configuration (JSON, see the README). */
TABILP_API tabilp_status tabilp_config_default(tabilp_config** out);
TABILP_API tabilp_status tabilp_config_parse(const char* json, tabilp_config** out);
TABILP_API tabilp_status tabilp_config_load(const char* path, tabilp_config** out);
TABILP_API tabilp_status tabilp_config_to_json(const tabilp_config* c, char** out);
/* Copies `c` with the solver time limit replaced; a value <= 0 means none. */
TABILP_API tabilp_status tabilp_config_with_time_limit(const tabilp_config* c, double seconds,
                                                       tabilp_config** out);
TABILP_API uint64_t tabilp_config_seed(const tabilp_config* c);
TABILP_API void tabilp_config_free(tabilp_config* c);

/* Knowledge tables: a .tsv file or a directory of them. */
TABILP_API tabilp_status tabilp_tables_load(const char* path, tabilp_tables** out);
TABILP_API size_t tabilp_tables_count(const tabilp_tables* t);
TABILP_API void tabilp_tables_free(tabilp_tables* t);

/* Questions (JSONL). */
TABILP_API tabilp_status tabilp_questions_load(const char* path, tabilp_questions** out);
TABILP_API size_t tabilp_questions_count(const tabilp_questions* q);
/* Borrowed; valid while `q` lives. NULL when out of range. */
TABILP_API const char* tabilp_questions_id(const tabilp_questions* q, size_t index);
TABILP_API size_t tabilp_questions_num_options(const tabilp_questions* q, size_t index);
TABILP_API size_t tabilp_questions_num_constituents(const tabilp_questions* q, size_t index);
/* -1 when the question has no gold answer or the index is out of range. */
TABILP_API int64_t tabilp_questions_gold(const tabilp_questions* q, size_t index);
TABILP_API void tabilp_questions_free(tabilp_questions* q);

/* Sentence-per-line corpus; pairs are counted within `window` tokens. */
TABILP_API tabilp_status tabilp_corpus_load(const char* path, size_t window, tabilp_corpus** out);
TABILP_API void tabilp_corpus_free(tabilp_corpus* c);

/* Sentence-retrieval solver with the BM25 settings of `config`. */
TABILP_API tabilp_status tabilp_ir_create(const tabilp_corpus* corpus, const tabilp_config* config,
                                          tabilp_ir** out);
/* `terms` lists constituent indices forming the question side; NULL means the
 * whole question. */
TABILP_API tabilp_status tabilp_ir_score(const tabilp_ir* ir, const tabilp_questions* q,
                                         size_t index, size_t option, const size_t* terms,
                                         size_t num_terms, double* out);
TABILP_API void tabilp_ir_free(tabilp_ir* ir);

/* Essential-term scorers: "prop-surf" and "prop-lem" need `train_path`
 * (dataset TSV), "max-pmi" and "sum-pmi" need `corpus`, "file" needs
 * `score_path` (JSONL). Unused inputs may be NULL. */
TABILP_API tabilp_status tabilp_scorer_create(const char* name, const char* train_path,
                                              const char* score_path, const tabilp_corpus* corpus,
                                              const tabilp_config* config, tabilp_scorer** out);
/* One score per constituent of question `index`; `capacity` must cover
 * them. */
TABILP_API tabilp_status tabilp_scorer_profile(const tabilp_scorer* s, const tabilp_questions* q,
                                               size_t index, double* out, size_t capacity);
TABILP_API void tabilp_scorer_free(tabilp_scorer* s);

typedef struct {
  double auc;
  double accuracy;
  double precision;
  double recall;
  double f1;
  double map;
  size_t terms;
  size_t questions;
} tabilp_et_metrics;

/* Scores every term of a dataset TSV. `q` (may be NULL) supplies question
 * context by id, which the PMI scorers need for answer options. Writes the
 * scores as a score-file JSONL and the metrics at `threshold`. */
TABILP_API tabilp_status tabilp_scorer_evaluate(const tabilp_scorer* s, const char* dataset_path,
                                                const tabilp_questions* q, double threshold,
                                                char** scores_jsonl, tabilp_et_metrics* metrics);

/* Metrics over parallel arrays; labels are 0/1. */
TABILP_API tabilp_status tabilp_et_metrics_compute(const char* const* question_ids,
                                                   const double* scores, const int* labels,
                                                   size_t n, double threshold,
                                                   tabilp_et_metrics* out);

typedef enum {
  TABILP_ET_NONE = 0,
  TABILP_ET_FORCE = 1,         /* force every term scoring above xi */
  TABILP_ET_CASCADE = 2,       /* sequential cascade over thresholds */
  TABILP_ET_CASCADE_BIG_M = 3  /* the cascade as one big-M program */
} tabilp_et_mode;

typedef struct {
  tabilp_et_mode mode;
  const tabilp_scorer* scorer; /* required unless mode is TABILP_ET_NONE */
  double xi;
  const double* thresholds;
  size_t num_thresholds;
  int include_support;  /* add the support graph to the answer JSON */
  const tabilp_ir* ir;  /* optional: add retrieval scores to the scorecard */
} tabilp_answer_options;

/* Answers question `index`. `answer_json` receives one JSON object; when
 * `scorecard_json` is not NULL it receives the question's scorecard with the
 * TableILP per-option confidences and support features (and the retrieval
 * scores when options->ir is set). `options` may be NULL. */
TABILP_API tabilp_status tabilp_answer(const tabilp_tables* t, const tabilp_questions* q,
                                       size_t index, const tabilp_config* config,
                                       const tabilp_answer_options* options, char** answer_json,
                                       char** scorecard_json);

/* 1 for a correct single choice, 1/k for a k-way tie holding gold, else 0. */
TABILP_API double tabilp_eval_score(const size_t* chosen, size_t k, size_t gold);

/* 0/1 programs. Build applies the forcing or big-M extension of `options`
 * (may be NULL; sequential cascades have no single program). */
TABILP_API tabilp_status tabilp_problem_build(const tabilp_tables* t, const tabilp_questions* q,
                                              size_t index, const tabilp_config* config,
                                              const tabilp_answer_options* options,
                                              tabilp_problem** out);
TABILP_API tabilp_status tabilp_problem_read_mps(const char* path, tabilp_problem** out);
TABILP_API tabilp_status tabilp_problem_write_mps(const tabilp_problem* p, const char* path);
TABILP_API size_t tabilp_problem_num_variables(const tabilp_problem* p);
TABILP_API size_t tabilp_problem_num_constraints(const tabilp_problem* p);

typedef struct {
  tabilp_solve_status status;
  double objective;
  size_t nodes;
  size_t lp_iterations;
  double wall_seconds;
} tabilp_solve_result;

/* Exact solve with the time and node limits of `config` (may be NULL).
 * `assignment` (may be NULL) receives one 0/1 byte per variable. */
TABILP_API tabilp_status tabilp_problem_solve(const tabilp_problem* p, const tabilp_config* config,
                                              tabilp_solve_result* out, uint8_t* assignment,
                                              size_t capacity);
/* Bound from the continuous relaxation; `feasible` is 0 when it is empty. */
TABILP_API tabilp_status tabilp_problem_lp_relax(const tabilp_problem* p, double* bound,
                                                 int* feasible);
TABILP_API void tabilp_problem_free(tabilp_problem* p);

/* Solver combination over scorecard JSONL files. */
TABILP_API tabilp_status tabilp_combiner_train(const char* scorecards_path,
                                               const tabilp_config* config, tabilp_combiner** out);
TABILP_API tabilp_status tabilp_combiner_load(const char* path, tabilp_combiner** out);
TABILP_API tabilp_status tabilp_combiner_to_json(const tabilp_combiner* m, char** out);
/* Scores one scorecard line: `result_json` gets the chosen option and the
 * per-option probabilities. */
TABILP_API tabilp_status tabilp_combiner_combine(const tabilp_combiner* m,
                                                 const char* scorecard_json, char** result_json);
TABILP_API void tabilp_combiner_free(tabilp_combiner* m);

#ifdef __cplusplus
}
#endif

#endif /* TABILP_TABILP_H */
