// Copyright 2026 The opl Authors
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
#ifndef OPL_OPL_H_
#define OPL_OPL_H_

/*
 * C interface to the opl engine: exact and sampled covariance of the events
 * {a -> s} and {s -> b} in a randomly oriented G(n, p), with a = 0, b = 1,
 * s = 2.
 *
 * Conventions:
 *  - Every function returning opl_status reports failure through the status
 *    and opl_last_error(); out-parameters are untouched on failure.
 *  - Exact rationals cross the boundary as "num/den" strings. Inputs also
 *    accept integers and decimal literals ("0.25").
 *  - Strings returned through char** are heap-allocated by the library and
 *    must be released with opl_string_free().
 *  - Handles are immutable after construction and may be shared between
 *    threads; free each exactly once.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(OPL_BUILDING_LIBRARY)
#  define OPL_API __attribute__((visibility("default")))
#else
#  define OPL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum opl_status {
  OPL_OK = 0,
  OPL_ERR_PARAMETER = 2,
  OPL_ERR_BUDGET = 3,
  OPL_ERR_CONTRACT = 4,
  OPL_ERR_IO = 5,
  OPL_ERR_INTERNAL = 6
} opl_status;

OPL_API const char* opl_version(void);
/* Message of the last failure on the calling thread ("" if none). */
OPL_API const char* opl_last_error(void);
OPL_API void opl_string_free(char* s);

/* Budgets in configurations: 3^15 by default, 3^21 unlocks n = 7. */
OPL_API uint64_t opl_default_budget(void);
OPL_API uint64_t opl_deep_budget(void);

OPL_API opl_status opl_edge_index(int i, int j, int n, uint64_t* out);

/* Rational helpers: canonical "num/den" form, p = 2c/n, and
 * lo + (hi - lo) * step / steps. */
OPL_API opl_status opl_rational_canonical(const char* x, char** out);
OPL_API opl_status opl_rational_to_double(const char* x, double* out);
OPL_API opl_status opl_scaled_p(const char* c, int n, char** out);
OPL_API opl_status opl_rational_lerp(const char* lo, const char* hi, uint64_t step, uint64_t steps, char** out);

/* ---- exact engine ------------------------------------------------------ */

typedef struct opl_counts opl_counts;

OPL_API opl_status opl_counts_enumerate(int n, uint64_t budget, unsigned threads, opl_counts** out);
/* Loads <cache_dir>/counts_n<n>.json when valid, else enumerates and stores.
 * *from_cache (optional) is set to 1 on a cache hit. */
OPL_API opl_status opl_counts_cached(int n, uint64_t budget, unsigned threads, const char* cache_dir,
                                     int* from_cache, opl_counts** out);
OPL_API opl_status opl_counts_from_json(const char* json, opl_counts** out);
/* {"n", "m", "N_A", "N_B", "N_AB"}, counts as decimal strings. */
OPL_API opl_status opl_counts_to_json(const opl_counts* counts, char** out);
OPL_API int opl_counts_n(const opl_counts* counts);
OPL_API void opl_counts_free(opl_counts* counts);

/* {"p", "P_A", "P_B", "P_AB", "cov"} as rationals. */
OPL_API opl_status opl_counts_probabilities(const opl_counts* counts, const char* p, char** out_json);

typedef struct opl_poly opl_poly;

OPL_API opl_status opl_poly_from_counts(const opl_counts* counts, opl_poly** out);
OPL_API void opl_poly_free(opl_poly* poly);
OPL_API size_t opl_poly_degree(const opl_poly* poly);
/* JSON array of coefficients of p^0, p^1, ... as rationals. */
OPL_API opl_status opl_poly_coefficients(const opl_poly* poly, char** out_json);
OPL_API opl_status opl_poly_eval(const opl_poly* poly, const char* x, char** out);
/* JSON array of {"lo", "hi", "lo_float", "hi_float"} brackets of sign
 * changes in [lo, hi], ascending. */
OPL_API opl_status opl_poly_roots(const opl_poly* poly, const char* lo, const char* hi, const char* tol,
                                  unsigned grid, char** out_json);

OPL_API opl_status opl_percolation_prob(int n, const char* q, int u, int v, uint64_t budget, char** out);

/* ---- path pairs -------------------------------------------------------- */

/* ceil((ln n)^2), at least 1. */
OPL_API int opl_default_cutoff(int n);
/* out_json: {"n", "L", "p", "total", "by_class": {...}, "pairs_by_class": {...}}
 * out_csv (optional): variant,parameters,pairs,subtotal rows. */
OPL_API opl_status opl_pairsum(int n, int L, const char* p, unsigned threads, char** out_json, char** out_csv);
OPL_API opl_status opl_count_type1(int n, int i, int j, char** out);
OPL_API opl_status opl_count_type2(int n, int i, int j, int k, int l, int m, char** out);
OPL_API opl_status opl_expected_paths(int n, const char* p, int L, char** out);
/* {"variant", "params": [..5], "len_a", "len_b", "delta", "mu", "common"} */
OPL_API opl_status opl_classify_pair(const int* path_a, size_t len_a, const int* path_b, size_t len_b,
                                     char** out_json);

/* ---- asymptotics ------------------------------------------------------- */

typedef struct opl_asymptotic {
  double c;
  int n;
  double value;
  double type1;
  double type2;
} opl_asymptotic;

OPL_API double opl_quartic(double c);
OPL_API int64_t opl_quartic_discriminant(void);
OPL_API opl_status opl_find_c_roots(double tol, double* c1, double* c2);
OPL_API opl_status opl_main_formula(double c, int n, opl_asymptotic* out);
OPL_API opl_status opl_truncated_series(double c, int terms, double* type1, double* type2);

/* ---- Monte Carlo ------------------------------------------------------- */

typedef struct opl_rng {
  uint64_t seed;
  uint32_t stream;
  uint64_t position; /* next sample index; advanced by opl_mc_estimate */
} opl_rng;

/* {"n", "p", "p_float", "samples", "seed", "stream", "stream_count",
 *  "pA_hat", "pB_hat", "pAB_hat", "cov_hat", "std_err", "wall_time"} */
OPL_API opl_status opl_mc_estimate(int n, const char* p, uint64_t samples, opl_rng* rng, unsigned threads,
                                   char** out_json);
/* {"n", "rows": [estimate...]}; row r uses stream rng->stream + r. */
OPL_API opl_status opl_mc_scan(int n, const char* const* grid, size_t grid_len, uint64_t samples,
                               const opl_rng* rng, unsigned threads, char** out_json);
/* {"determined", "p_lo", "p_hi", "confidence", "samples_used", "points"} */
OPL_API opl_status opl_locate_sign_change(int n, const char* lo, const char* hi, uint64_t budget,
                                          const opl_rng* rng, unsigned threads, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* OPL_OPL_H_ */
