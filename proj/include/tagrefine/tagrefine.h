// Copyright 2026 The tagrefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the label refinement engine.
 *
 * Every function returns a tr_status. On failure a message describing the
 * error is available from tr_last_error() on the same thread until the next
 * call into the library. Handles are opaque and owned by the caller, who
 * releases them with the matching *_free function. A loaded knowledge handle
 * is read-only and may be shared across threads. */

#ifndef TAGREFINE_TAGREFINE_H_
#define TAGREFINE_TAGREFINE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TR_API __declspec(dllexport)
#elif defined(__GNUC__)
#define TR_API __attribute__((visibility("default")))
#else
#define TR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tr_status {
  TR_OK = 0,
  TR_ERR_IO = 1,         /* file missing or unreadable */
  TR_ERR_PARSE = 2,      /* malformed file content */
  TR_ERR_CONFIG = 3,     /* invalid parameters */
  TR_ERR_MISMATCH = 4,   /* inputs disagree on image ids */
  TR_ERR_CONTRACT = 5,   /* invalid argument or precondition */
  TR_ERR_SIZE = 6,       /* instance too large */
  TR_ERR_INTERNAL = 7
} tr_status;

TR_API const char* tr_last_error(void);
TR_API const char* tr_status_name(tr_status status);
TR_API const char* tr_version(void);

/* ---- Parameters ------------------------------------------------------- */

typedef enum tr_budget_mode {
  TR_BUDGET_CONSTRAINT = 0, /* total label budget enforced inside the ILP */
  TR_BUDGET_TRUNCATE = 1    /* solve without it, then drop weakest labels */
} tr_budget_mode;

typedef struct tr_params {
  double alpha, beta, gamma, kappa;
  double delta;
  double tau_s;
  int budget;
  tr_budget_mode budget_mode;
  int visir_star;       /* nonzero: at most floor(0.8 * boxes) visual labels */
  size_t abstract_cap;  /* abstract candidates kept per image */
} tr_params;

/* Fills the defaults: weights 1, delta 0.5, tau_s 0.1, budget 5 enforced in
 * the ILP, no visual cap, 25 abstract candidates. */
TR_API void tr_params_init(tr_params* params);
TR_API tr_status tr_params_validate(const tr_params* params);

/* ---- Knowledge tables ------------------------------------------------- */

typedef struct tr_knowledge tr_knowledge;

/* NULL paths load as empty tables. Without an allowlist no hypernym is
 * pruned by score. */
typedef struct tr_knowledge_paths {
  const char* embeddings;
  const char* hypernyms;
  const char* allowlist;
  double hypernym_threshold;
  const char* assertions;
  const char* coloc;
  const char* vsim;
} tr_knowledge_paths;

typedef struct tr_knowledge_stats {
  size_t embeddings, embedding_dim, hypernym_edges, assertions, coloc_pairs,
      vsim_pairs;
  size_t warnings; /* duplicates and rows dropped while loading */
} tr_knowledge_stats;

TR_API tr_status tr_knowledge_load(const tr_knowledge_paths* paths,
                                   tr_knowledge** out);
TR_API void tr_knowledge_free(tr_knowledge* knowledge);
TR_API tr_status tr_knowledge_stats_get(const tr_knowledge* knowledge,
                                        tr_knowledge_stats* out);
/* Semantic relatedness of two visual labels under params->delta. */
TR_API tr_status tr_knowledge_srel(const tr_knowledge* knowledge,
                                   const tr_params* params, const char* a,
                                   const char* b, double* out);

/* ---- Visual-similarity mining ----------------------------------------- */

typedef struct tr_mine_report {
  size_t records;   /* accepted */
  size_t malformed; /* unparsable lines, skipped */
  size_t rejected;  /* invariant violations, skipped */
  size_t labels;
  size_t pairs;
} tr_mine_report;

/* Reads a JSON-lines detection corpus and writes the vsim TSV. */
TR_API tr_status tr_mine_vsim(const char* corpus_path, const char* out_path,
                              tr_mine_report* report);

/* ---- Refinement ------------------------------------------------------- */

typedef struct tr_refine_options {
  int jobs;              /* worker threads, >= 1 */
  int select_incoherent; /* nonzero: keep only incoherent test images */
  const char* dump_lp_dir; /* optional: write <image>.lp per image */
} tr_refine_options;

TR_API void tr_refine_options_init(tr_refine_options* options);

typedef struct tr_refine_report {
  size_t images_in;
  size_t images_out;
  size_t labels;
} tr_refine_report;

/* Refines every record of a detections JSON-lines file and writes one
 * result line per image, in input order. */
TR_API tr_status tr_refine_file(const tr_knowledge* knowledge,
                                const tr_params* params,
                                const tr_refine_options* options,
                                const char* detections_path,
                                const char* out_path,
                                tr_refine_report* report);

typedef struct tr_result tr_result;

/* Refines a single detection record given as one JSON object. */
TR_API tr_status tr_refine_json(const tr_knowledge* knowledge,
                                const tr_params* params,
                                const char* record_json, tr_result** out);
TR_API void tr_result_free(tr_result* result);
TR_API size_t tr_result_label_count(const tr_result* result);
/* Accessors return NULL for an out-of-range index. */
TR_API const char* tr_result_label(const tr_result* result, size_t index);
TR_API const char* tr_result_space(const tr_result* result, size_t index);
TR_API const char* tr_result_box(const tr_result* result, size_t index);
TR_API double tr_result_objective(const tr_result* result);
/* The result as one output JSON line (no trailing newline). */
TR_API const char* tr_result_json(const tr_result* result);

/* ---- Evaluation ------------------------------------------------------- */

typedef struct tr_system {
  const char* name;
  const char* refined_path;
} tr_system;

/* Writes the metrics TSV. Returns TR_ERR_MISMATCH, with the differing image
 * ids in tr_last_error(), when a system and the judgments disagree. */
TR_API tr_status tr_eval_files(const tr_system* systems, size_t system_count,
                               const char* judgments_path,
                               const char* report_path);

/* ---- Hyperparameter search -------------------------------------------- */

typedef struct tr_range {
  double lo, hi;
} tr_range;

typedef struct tr_search_space {
  tr_range alpha, beta, gamma, kappa, delta;
} tr_search_space;

/* Every range [0, 1]. */
TR_API void tr_search_space_init(tr_search_space* space);

/* Randomized search. Fields of *base other than the sampled weights are kept.
 * Writes the trial log TSV to log_path when non-NULL. */
TR_API tr_status tr_tune_file(const tr_knowledge* knowledge,
                              const tr_params* base,
                              const tr_search_space* space,
                              const char* train_path, int trials,
                              uint64_t seed, int jobs, const char* log_path,
                              tr_params* best, double* best_f1);

#ifdef __cplusplus
}
#endif

#endif /* TAGREFINE_TAGREFINE_H_ */
