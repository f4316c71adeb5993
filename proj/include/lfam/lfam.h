/* Copyright 2026 The lfam Authors
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

/* C interface to the lfam core: Dirichlet character families of fixed
 * order, L-function evaluation, moment and large-sieve experiments, zero
 * counting and zero-detector diagnostics.
 *
 * Conventions:
 *   - every fallible call returns lfam_status; on failure
 *     lfam_last_error() holds a thread-local description
 *   - objects returned through ** out-parameters are owned by the caller
 *     and released with the matching _free function
 *   - pointers returned as "borrowed" stay valid while the owner lives
 *   - all computations are deterministic for fixed inputs, seeds and
 *     tolerances, independent of the worker count
 */

#ifndef LFAM_H
#define LFAM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lfam_status {
  LFAM_OK = 0,
  LFAM_ERR_DOMAIN = 1,   /* bad mathematical input */
  LFAM_ERR_ACCURACY = 2, /* tolerance unreachable within the configured caps */
  LFAM_ERR_USAGE = 3,    /* bad call: null pointer, short buffer, unknown key */
  LFAM_ERR_INTERNAL = 4  /* violated internal invariant */
} lfam_status;

const char* lfam_version(void);
const char* lfam_last_error(void);

typedef struct lfam_ctx lfam_ctx;
typedef struct lfam_character lfam_character;
typedef struct lfam_family lfam_family;
typedef struct lfam_zero_list lfam_zero_list;

typedef struct lfam_complex {
  double re, im;
} lfam_complex;

/* --- context ----------------------------------------------------------- */

/* Keys for lfam_ctx_set / lfam_ctx_get:
 *   "tol"      absolute tolerance of the trusted evaluator (default 1e-12)
 *   "t_cap"    Euler-Maclaurin reach in |t|                (default 200)
 *   "afe_cap"  largest q(|t|+1) the smoothed path accepts  (default 1e5)
 *   "quad_tol" relative tolerance of adaptive quadratures  (default 1e-6)
 *   "workers"  worker threads for family-parallel loops    (default 1)
 */
lfam_ctx* lfam_ctx_new(void);
void lfam_ctx_free(lfam_ctx* ctx);
lfam_status lfam_ctx_set(lfam_ctx* ctx, const char* key, double value);
lfam_status lfam_ctx_get(const lfam_ctx* ctx, const char* key, double* value);

/* --- integer primitives ------------------------------------------------ */

lfam_status lfam_moebius(int64_t n, int* out);
lfam_status lfam_tau_k(int64_t n, int k, int64_t* out);
lfam_status lfam_squarefree_decompose(int64_t m, int64_t* squarefree, int64_t* square_root);
/* Writes up to cap (prime, exponent) pairs; *count receives the total. */
lfam_status lfam_factorize(int64_t n, int64_t* primes, int* exponents, size_t cap,
                           size_t* count);

/* --- characters -------------------------------------------------------- */

/* phi(q): number of characters mod q (q >= 3). */
lfam_status lfam_character_count(int64_t q, size_t* count);
/* Character number `index` in the canonical enumeration order mod q. */
lfam_status lfam_character_get(int64_t q, size_t index, lfam_character** out);
lfam_status lfam_character_conjugate(const lfam_character* chi, lfam_character** out);
void lfam_character_free(lfam_character* chi);

int64_t lfam_character_modulus(const lfam_character* chi);
int64_t lfam_character_order(const lfam_character* chi);
int lfam_character_parity(const lfam_character* chi); /* 0 even, 1 odd */
int64_t lfam_character_conductor(const lfam_character* chi);
int lfam_character_is_primitive(const lfam_character* chi);
lfam_status lfam_character_exponents(const lfam_character* chi, int64_t* buf, size_t cap,
                                     size_t* count);
lfam_status lfam_character_value(const lfam_character* chi, int64_t n, lfam_complex* out);
lfam_status lfam_gauss_sum(const lfam_character* chi, lfam_complex* out);
lfam_status lfam_root_number(const lfam_character* chi, lfam_complex* out);

/* Primitive characters of exact order j with conductor in (Q, 2Q]. */
lfam_status lfam_family_enumerate(lfam_ctx* ctx, int order_j, double Q, lfam_family** out);
void lfam_family_free(lfam_family* fam);
size_t lfam_family_size(const lfam_family* fam);
/* Borrowed pointer, valid while fam lives. */
const lfam_character* lfam_family_get(const lfam_family* fam, size_t index);

/* --- L-function evaluation --------------------------------------------- */

enum { LFAM_METHOD_HURWITZ_ORACLE = 0, LFAM_METHOD_SMOOTHED_AFE = 1 };

typedef struct lfam_eval_result {
  lfam_complex value;
  double abs_error_bound;
  long long terms_used;
  int method;
} lfam_eval_result;

/* zeta(s, a) for a in (0, 1], s != 1. */
lfam_status lfam_hurwitz_zeta(lfam_ctx* ctx, double sigma, double t, double a,
                              lfam_eval_result* out);
lfam_status lfam_l_value(lfam_ctx* ctx, const lfam_character* chi, double sigma, double t,
                         int method, lfam_eval_result* out);
lfam_status lfam_l_derivative(lfam_ctx* ctx, const lfam_character* chi, double sigma, double t,
                              lfam_eval_result* out);
/* coeffs must hold nmax+1 entries; index 0 is left untouched. */
lfam_status lfam_mollifier_coefficients(double X, int64_t nmax, int64_t* coeffs);
lfam_status lfam_smoothed_power_sum(lfam_ctx* ctx, const lfam_character* chi, double sigma,
                                    double t, int k, double U, lfam_complex* out);
lfam_status lfam_mellin_identity_residual(lfam_ctx* ctx, const lfam_character* chi, double sigma,
                                          double t, int k, double U, double c_offset,
                                          double* residual);

/* --- moments ------------------------------------------------------------ */

typedef struct lfam_moment_report {
  int j;
  double Q;
  double T;
  double t;
  int k;
  double delta;
  double value;
  double quadrature_error;
  long long family_size;
  double integrated_comparison; /* discrete reports: (1/delta+1) * integrated */
} lfam_moment_report;

/* per_character may be NULL or an array of lfam_family_size(fam) doubles. */
lfam_status lfam_family_moment_fixed_t(lfam_ctx* ctx, const lfam_family* fam, double t, int k,
                                       lfam_moment_report* out, double* per_character);
lfam_status lfam_integrated_family_moment(lfam_ctx* ctx, const lfam_family* fam, double T, int k,
                                          double tol, lfam_moment_report* out,
                                          double* per_character);

enum { LFAM_SPACING_GRID = 0, LFAM_SPACING_GREEDY = 1 };

lfam_status lfam_generate_wellspaced(lfam_ctx* ctx, const lfam_character* chi, double T,
                                     double delta, int strategy, double* points, size_t cap,
                                     size_t* count);
/* sets[i] / set_sizes[i] give the well-spaced ordinates for family member i. */
lfam_status lfam_discrete_family_moment(lfam_ctx* ctx, const lfam_family* fam, double T,
                                        double delta, const double* const* sets,
                                        const size_t* set_sizes, int k, lfam_moment_report* out,
                                        double* per_character);
lfam_status lfam_hardy_littlewood(lfam_ctx* ctx, double T, double tol, double* value,
                                  double* ratio_tlogt, double* ratio_refined,
                                  double* quadrature_error);
lfam_status lfam_exponent_fit(const double* Q, const double* T, const double* value, size_t n,
                              double* alpha, double* beta, double* intercept,
                              double* max_residual);
lfam_status lfam_lemma31_comparison(lfam_ctx* ctx, const lfam_family* fam, double T, double t,
                                    double eps, double* lhs, double* rhs, double* N,
                                    int* degenerate);

/* --- large sieve --------------------------------------------------------- */

typedef struct lfam_sieve_report {
  int j;
  double Q, T, N;
  double lhs;
  double norm;
  double bound;
  double ratio;
  int mode; /* 0 discrete, 1 integrated */
  long long family_size;
  uint64_t seed;
} lfam_sieve_report;

lfam_status lfam_delta_bound(int j, double Q, double T, double N, double* out);
/* Seeded unit-modulus coefficients on the squarefree integers in (N, 2N]. */
lfam_status lfam_sieve_discrete(lfam_ctx* ctx, const lfam_family* fam, double N, uint64_t seed,
                                lfam_sieve_report* out);
lfam_status lfam_sieve_discrete_coeffs(lfam_ctx* ctx, const lfam_family* fam, double N,
                                       const int64_t* idx, const lfam_complex* coef, size_t count,
                                       lfam_sieve_report* out);
lfam_status lfam_sieve_integrated(lfam_ctx* ctx, const lfam_family* fam, double T, double N,
                                  uint64_t seed, lfam_sieve_report* out);

/* Gallagher's inequality for f = L(1/2+it, chi) on an explicit well-spaced
 * set; the inequality carries no hidden constant and holds must be 1. */
lfam_status lfam_gallagher_l(lfam_ctx* ctx, const lfam_character* chi, double T, double delta,
                             const double* points, size_t npoints, double* lhs, double* rhs,
                             double* int_f2, double* int_df2, int* holds);
/* Same for a Dirichlet polynomial sum a_n chi(n) n^{-it} (chi may be NULL). */
lfam_status lfam_gallagher_poly(lfam_ctx* ctx, const lfam_character* chi, double T, double delta,
                                const double* points, size_t npoints, const int64_t* idx,
                                const lfam_complex* coef, size_t count, double* lhs, double* rhs,
                                double* int_f2, double* int_df2, int* holds);

/* Mean-value check over seeded per-character point sets (sigma_t, t) with
 * sigma_t in [sigma0, 1); coefficients are seeded unit-modulus values on the
 * squarefree n <= N.  Reports both right-hand sides; nothing is asserted. */
lfam_status lfam_meanvalue(lfam_ctx* ctx, const lfam_family* fam, double T, double delta,
                           double sigma0, double N, uint64_t seed, double* lhs,
                           double* rhs_delta, double* rhs_montgomery, long long* point_count);

/* --- zeros --------------------------------------------------------------- */

lfam_status lfam_count_zeros_rectangle(lfam_ctx* ctx, const lfam_character* chi, double sigma,
                                       double T, long long* count, double* winding_residual);

lfam_status lfam_critical_line_zeros(lfam_ctx* ctx, const lfam_character* chi, double T,
                                     lfam_zero_list** out);
void lfam_zero_list_free(lfam_zero_list* zl);
size_t lfam_zero_list_size(const lfam_zero_list* zl);
lfam_status lfam_zero_list_get(const lfam_zero_list* zl, size_t index, double* gamma,
                               double* width);

enum {
  LFAM_DETECTOR_R1 = 0,
  LFAM_DETECTOR_R2 = 1,
  LFAM_DETECTOR_BOTH = 2,
  LFAM_DETECTOR_NEITHER = 3
};

typedef struct lfam_detector_report {
  double gamma;
  double X, Y, C;
  double r1_value;
  double r2_value;
  double identity_residual;
  double residue_magnitude;
  int cls;
} lfam_detector_report;

lfam_status lfam_detector_check(lfam_ctx* ctx, const lfam_character* chi, double gamma, double X,
                                double Y, double C, lfam_detector_report* out);

/* Fixed table of zero-density bound formulas (plus the v_parameter row). */
size_t lfam_zero_density_bound_count(void);
const char* lfam_zero_density_bound_name(size_t index);
lfam_status lfam_zero_density_bounds(double sigma, double Q, double T, double* values,
                                     size_t count);

/* Family zero count with per-character winding residuals (arrays may be
 * NULL or hold lfam_family_size(fam) entries). */
lfam_status lfam_family_zero_count(lfam_ctx* ctx, const lfam_family* fam, double sigma, double T,
                                   long long* total, long long* per_character,
                                   double* winding_residuals);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LFAM_H */
