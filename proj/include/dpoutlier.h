/*
 * Copyright 2026 dpoutlier developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C API of the dpoutlier shared library: differentially private
 * distance-based outlier analysis.
 *
 * Conventions:
 *   - Every fallible function returns a dpo_status; DPO_OK is 0. On failure
 *     dpo_last_error() returns a thread-local message describing the cause.
 *   - Objects are opaque handles created by dpo_*_create/load functions and
 *     released with the matching dpo_*_free. Passing NULL to a free function
 *     is a no-op.
 *   - Subspaces are arrays of 1-based attribute indices.
 *   - All randomized operations take an explicit 64-bit seed and are
 *     deterministic given that seed.
 */

#ifndef DPOUTLIER_H
#define DPOUTLIER_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dpo_status {
  DPO_OK = 0,
  DPO_ERR_ARGUMENT = 1,    /* invalid argument or configuration */
  DPO_ERR_DIMENSION = 2,   /* index out of range / unsupported dimension */
  DPO_ERR_PARSE = 3,       /* malformed CSV or table file */
  DPO_ERR_CONSISTENCY = 4, /* mismatched privacy parameters */
  DPO_ERR_RESOURCE = 5,    /* a configured search cap was exceeded */
  DPO_ERR_VERIFY = 6,      /* a verification check failed */
  DPO_ERR_IO = 7,          /* file system failure */
  DPO_ERR_INTERNAL = 8
} dpo_status;

const char* dpo_status_name(dpo_status status);

/* Thread-local message for the most recent failure in this thread. */
const char* dpo_last_error(void);

const char* dpo_version(void);

/* ------------------------------------------------------------------ */
/* Datasets                                                            */

typedef struct dpo_dataset dpo_dataset;

/* `values` is row-major n x d. `labels` may be NULL; nonzero = outlier. */
dpo_status dpo_dataset_from_rows(const double* values, int64_t n, int32_t d,
                                 const int32_t* labels, const char* name,
                                 dpo_dataset** out);

/* Planted-outlier mixture: n_inliers standard normal rows plus n_outliers
 * rows from N(outlier_mean, diag(outlier_var)); arrays have length d. */
dpo_status dpo_dataset_synthetic(int64_t n_inliers, int64_t n_outliers,
                                 int32_t d, const double* outlier_mean,
                                 const double* outlier_var, uint64_t seed,
                                 const char* name, dpo_dataset** out);

/* CSV with a header row; numeric feature cells. `label_column` may be NULL.
 * `drop_columns` is an array of `n_drop` column names to discard. Records
 * whose label equals `positive_label` are inliers, all others outliers. */
dpo_status dpo_dataset_load_csv(const char* path, const char* label_column,
                                const char* const* drop_columns, int32_t n_drop,
                                const char* positive_label, dpo_dataset** out);

/* Per-attribute mean 0 / population variance 1 rescaling. */
dpo_status dpo_dataset_standardize(const dpo_dataset* in, dpo_dataset** out);

int64_t dpo_dataset_size(const dpo_dataset* dataset);
int32_t dpo_dataset_dim(const dpo_dataset* dataset);
int dpo_dataset_has_labels(const dpo_dataset* dataset);
void dpo_dataset_free(dpo_dataset* dataset);

/* ------------------------------------------------------------------ */
/* Exact (non-private) queries                                         */

/* Number of records with fewer than k neighbors within radius r in the
 * subspace spanned by `dims` (ndims 1-based attribute indices). */
dpo_status dpo_count_outliers(const dpo_dataset* dataset, const int32_t* dims,
                              int32_t ndims, int32_t k, double r,
                              int64_t* out_count);

/* Detection quality of the exact count-based detector against the
 * dataset's labels; outlier is the positive class. `degenerate` is set to
 * 1 when precision or recall had a zero denominator and was reported as 0. */
dpo_status dpo_evaluate_detection(const dpo_dataset* dataset,
                                  const int32_t* dims, int32_t ndims,
                                  int32_t k, double r, double* accuracy,
                                  double* precision, double* recall,
                                  int* degenerate);

/* Grid radius maximizing detection accuracy; ties go to the smaller r. */
dpo_status dpo_tune_radius(const dpo_dataset* dataset, const int32_t* dims,
                           int32_t ndims, int32_t k, const double* grid,
                           int32_t grid_len, double* best_r,
                           double* best_accuracy);

/* ------------------------------------------------------------------ */
/* Kissing-number table and sensitivity bounds                         */

typedef struct dpo_table dpo_table;

dpo_status dpo_table_default(dpo_table** out);
/* Plain text, one "<d> <K_d_upper> <citation-key>" entry per line. */
dpo_status dpo_table_load(const char* path, dpo_table** out);
int32_t dpo_table_max_dim(const dpo_table* table);
dpo_status dpo_table_lookup(const dpo_table* table, int32_t d, int64_t* out_kd);
void dpo_table_free(dpo_table* table);

/* lower = min(N, 2dk + 1), upper = min(N, k*K_d + 1). */
dpo_status dpo_global_bounds(int64_t n, int32_t d, int32_t k,
                             const dpo_table* table, int64_t* lower,
                             int64_t* upper);

/* Upper bound on the local sensitivity of the outlier count. `pool_cap`
 * bounds the exponential coverable-subset search (pass 0 for the default). */
dpo_status dpo_local_bound(const dpo_dataset* dataset, const int32_t* dims,
                           int32_t ndims, int32_t k, double r,
                           int32_t pool_cap, double* out_bound);

/* Smooth upper bound on the local sensitivity at smoothing rate beta. */
dpo_status dpo_smooth_bound(const dpo_dataset* dataset, const int32_t* dims,
                            int32_t ndims, int32_t k, double r, double beta,
                            int32_t pool_cap, double* out_bound);

/* Smallest enclosing ball radius of an n x d point set. */
dpo_status dpo_seb_radius(const double* points, int64_t n, int32_t d,
                          double* out_radius);

/* ------------------------------------------------------------------ */
/* Private releases                                                    */

/* beta = epsilon / (4 (p + ln(2/delta))); the smoothing rate a smooth bound
 * must be computed with before dpo_gaussian_smooth will accept it. */
dpo_status dpo_smooth_beta(double epsilon, double delta, int32_t p,
                           double* out_beta);

/* count + N(0, gs_upper^2 * 2 ln(2/delta) / epsilon^2). */
dpo_status dpo_gaussian_global(int64_t count, int64_t gs_upper, double epsilon,
                               double delta, uint64_t seed, double* noisy,
                               double* sigma);

/* count + (smooth_bound / alpha) * N(0,1) with
 * alpha = epsilon / (5 sqrt(2 ln(2/delta))). `bound_beta` must equal the
 * beta for (epsilon, delta, p); a mismatch is DPO_ERR_CONSISTENCY. */
dpo_status dpo_gaussian_smooth(int64_t count, double smooth_bound,
                               double bound_beta, double epsilon, double delta,
                               int32_t p, uint64_t seed, double* noisy,
                               double* sigma);

/* ------------------------------------------------------------------ */
/* Subspace discovery                                                  */

/* Per-candidate exact counts and normalized utilities over all
 * c-dimensional subspaces, computed once so selection can be repeated
 * cheaply. */
typedef struct dpo_utilities dpo_utilities;

dpo_status dpo_subspace_utilities(const dpo_dataset* dataset, int32_t c,
                                  int32_t k, double r, const dpo_table* table,
                                  dpo_utilities** out);
int64_t dpo_utilities_count(const dpo_utilities* utilities);
/* `dims_out` receives the candidate's c attribute indices. Either output
 * pointer may be NULL. */
dpo_status dpo_utilities_get(const dpo_utilities* utilities, int64_t index,
                             int32_t* dims_out, double* utility,
                             int64_t* exact_count);

/* h rounds of the exponential mechanism at epsilon/h over the not yet
 * selected candidates; writes h candidate indices to out_indices. */
dpo_status dpo_top_h_select(const dpo_utilities* utilities, int32_t h,
                            double epsilon, uint64_t seed,
                            int64_t* out_indices);
void dpo_utilities_free(dpo_utilities* utilities);

/* ------------------------------------------------------------------ */
/* Budget ledger                                                       */

typedef struct dpo_ledger dpo_ledger;

dpo_status dpo_ledger_create(dpo_ledger** out);
dpo_status dpo_ledger_record(dpo_ledger* ledger, const char* description,
                             double epsilon, double delta);
dpo_status dpo_ledger_totals(const dpo_ledger* ledger, double* epsilon_total,
                             double* delta_total);
/* One JSON object per line: {description, epsilon, delta, timestamp}. */
dpo_status dpo_ledger_export_jsonl(const dpo_ledger* ledger, const char* path);
void dpo_ledger_free(dpo_ledger* ledger);

/* ------------------------------------------------------------------ */
/* Verification                                                        */

/* Runs the oracle-equivalence and privacy-ratio suites. On completion
 * `*out_report` holds a newly allocated human-readable report; release it
 * with dpo_string_free. Returns DPO_OK when every check passed and
 * DPO_ERR_VERIFY otherwise. `inject_failure` purposely perturbs one check
 * so harnesses can confirm failures are reported. */
dpo_status dpo_verify_run(uint64_t seed, int inject_failure,
                          char** out_report);

void dpo_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DPOUTLIER_H */
