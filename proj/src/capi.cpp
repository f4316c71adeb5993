// Copyright 2026 The lfam Authors
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

#include "lfam/lfam.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "characters.hpp"
#include "errors.hpp"
#include "lfunc.hpp"
#include "moments.hpp"
#include "sieve.hpp"
#include "zeros.hpp"

using lfam::cplx;
using lfam::arith::i64;
using lfam::arith::u64;

struct lfam_ctx {
  lfam::lfunc::Options eval;
  double quad_tol = 1e-6;
  unsigned workers = 1;
};

struct lfam_character {
  lfam::chars::DirichletCharacter impl;
};

struct lfam_family {
  lfam::chars::CharacterFamily impl;
  std::vector<lfam_character> wrappers;
};

struct lfam_zero_list {
  std::vector<lfam::zeros::CriticalZero> zeros;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

template <class F>
lfam_status guard(F&& f) {
  try {
    f();
    return LFAM_OK;
  } catch (const lfam::domain_error& e) {
    set_error(e.what());
    return LFAM_ERR_DOMAIN;
  } catch (const lfam::accuracy_error& e) {
    set_error(e.what());
    return LFAM_ERR_ACCURACY;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return LFAM_ERR_USAGE;
  } catch (const std::exception& e) {
    set_error(e.what());
    return LFAM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown exception");
    return LFAM_ERR_INTERNAL;
  }
}

lfam_status usage(const char* msg) {
  set_error(msg);
  return LFAM_ERR_USAGE;
}

lfam_complex to_c(const cplx& z) { return {z.real(), z.imag()}; }

lfam::moments::Options moment_options(const lfam_ctx* ctx) {
  lfam::moments::Options o;
  if (ctx) {
    o.eval = ctx->eval;
    o.workers = ctx->workers;
  }
  return o;
}

lfam::zeros::Options zero_options(const lfam_ctx* ctx) {
  lfam::zeros::Options o;
  if (ctx) {
    o.eval = ctx->eval;
    o.workers = ctx->workers;
  }
  return o;
}

void fill_moment_report(const lfam::moments::MomentReport& rep, lfam_moment_report* out,
                        double* per_character) {
  out->j = rep.j;
  out->Q = rep.Q;
  out->T = rep.T;
  out->t = rep.t;
  out->k = rep.k;
  out->delta = rep.delta;
  out->value = rep.value;
  out->quadrature_error = rep.quadrature_error;
  out->family_size = rep.family_size;
  out->integrated_comparison = rep.integrated_comparison;
  if (per_character)
    for (std::size_t i = 0; i < rep.per_character.size(); ++i)
      per_character[i] = rep.per_character[i];
}

void fill_sieve_report(const lfam::sieve::SieveReport& rep, lfam_sieve_report* out) {
  out->j = rep.j;
  out->Q = rep.Q;
  out->T = rep.T;
  out->N = rep.N;
  out->lhs = rep.lhs;
  out->norm = rep.norm;
  out->bound = rep.bound;
  out->ratio = rep.ratio;
  out->mode = rep.mode == lfam::sieve::SieveMode::discrete ? 0 : 1;
  out->family_size = rep.family_size;
  out->seed = rep.seed;
}

std::vector<std::pair<u64, cplx>> coeff_pairs(const int64_t* idx, const lfam_complex* coef,
                                              std::size_t count) {
  std::vector<std::pair<u64, cplx>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (idx[i] <= 0) throw lfam::domain_error("coefficient index must be positive");
    out.push_back({(u64)idx[i], cplx(coef[i].re, coef[i].im)});
  }
  return out;
}

// seeded point sets for the mean-value check: per character, a delta-spaced
// random walk of ordinates with sigma_t uniform in [sigma0, 1)
std::vector<std::vector<std::pair<double, double>>> meanvalue_points(
    const lfam::chars::CharacterFamily& fam, double T, double delta, double sigma0, u64 seed) {
  std::vector<std::vector<std::pair<double, double>>> pts(fam.members.size());
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    lfam::splitmix64 rng(seed * 0x9e3779b97f4a7c15ULL + i + 1);
    double t = 0.5 * delta - T;
    while (t <= T - 0.5 * delta) {
      double sig = sigma0 + 0.98 * (1.0 - sigma0) * rng.next_unit();
      pts[i].push_back({sig, t});
      t += delta * (1.0 + rng.next_unit());
    }
  }
  return pts;
}

void fill_eval(const lfam::lfunc::EvalResult& r, lfam_eval_result* out) {
  out->value = to_c(r.value);
  out->abs_error_bound = r.abs_error_bound;
  out->terms_used = r.terms_used;
  out->method = r.method == lfam::lfunc::Method::hurwitz_oracle ? LFAM_METHOD_HURWITZ_ORACLE
                                                                : LFAM_METHOD_SMOOTHED_AFE;
}

}  // namespace

extern "C" {

const char* lfam_version(void) { return "0.1.0"; }

const char* lfam_last_error(void) { return g_last_error.c_str(); }

lfam_ctx* lfam_ctx_new(void) { return new (std::nothrow) lfam_ctx; }

void lfam_ctx_free(lfam_ctx* ctx) { delete ctx; }

lfam_status lfam_ctx_set(lfam_ctx* ctx, const char* key, double value) {
  if (!ctx || !key) return usage("lfam_ctx_set: null argument");
  std::string k = key;
  if (k == "tol") {
    if (!(value > 0)) return usage("lfam_ctx_set: tol must be positive");
    ctx->eval.tol = value;
  } else if (k == "t_cap") {
    ctx->eval.t_cap = value;
  } else if (k == "afe_cap") {
    ctx->eval.afe_cap = value;
  } else if (k == "quad_tol") {
    if (!(value > 0)) return usage("lfam_ctx_set: quad_tol must be positive");
    ctx->quad_tol = value;
  } else if (k == "workers") {
    if (value < 1 || value > 256) return usage("lfam_ctx_set: workers must lie in [1, 256]");
    ctx->workers = (unsigned)value;
  } else {
    return usage("lfam_ctx_set: unknown key");
  }
  return LFAM_OK;
}

lfam_status lfam_ctx_get(const lfam_ctx* ctx, const char* key, double* value) {
  if (!ctx || !key || !value) return usage("lfam_ctx_get: null argument");
  std::string k = key;
  if (k == "tol")
    *value = ctx->eval.tol;
  else if (k == "t_cap")
    *value = ctx->eval.t_cap;
  else if (k == "afe_cap")
    *value = ctx->eval.afe_cap;
  else if (k == "quad_tol")
    *value = ctx->quad_tol;
  else if (k == "workers")
    *value = ctx->workers;
  else
    return usage("lfam_ctx_get: unknown key");
  return LFAM_OK;
}

/* --- integer primitives ------------------------------------------------ */

lfam_status lfam_moebius(int64_t n, int* out) {
  if (!out) return usage("lfam_moebius: null output");
  if (n <= 0) return usage("lfam_moebius: n must be positive");
  return guard([&] { *out = lfam::arith::moebius((u64)n); });
}

lfam_status lfam_tau_k(int64_t n, int k, int64_t* out) {
  if (!out) return usage("lfam_tau_k: null output");
  if (n <= 0) return usage("lfam_tau_k: n must be positive");
  return guard([&] { *out = lfam::arith::tau_k((u64)n, k); });
}

lfam_status lfam_squarefree_decompose(int64_t m, int64_t* squarefree, int64_t* square_root) {
  if (!squarefree || !square_root) return usage("lfam_squarefree_decompose: null output");
  if (m <= 0) return usage("lfam_squarefree_decompose: m must be positive");
  return guard([&] {
    auto [n, l] = lfam::arith::squarefree_decompose((u64)m);
    *squarefree = (int64_t)n;
    *square_root = (int64_t)l;
  });
}

lfam_status lfam_factorize(int64_t n, int64_t* primes, int* exponents, size_t cap,
                           size_t* count) {
  if (!count || (cap && (!primes || !exponents))) return usage("lfam_factorize: null buffer");
  if (n <= 0) return usage("lfam_factorize: n must be positive");
  return guard([&] {
    auto f = lfam::arith::factorize((u64)n);
    *count = f.factors.size();
    for (std::size_t i = 0; i < f.factors.size() && i < cap; ++i) {
      primes[i] = (int64_t)f.factors[i].first;
      exponents[i] = f.factors[i].second;
    }
  });
}

/* --- characters -------------------------------------------------------- */

lfam_status lfam_character_count(int64_t q, size_t* count) {
  if (!count) return usage("lfam_character_count: null output");
  if (q < 3) return usage("lfam_character_count: q >= 3 required");
  return guard([&] { *count = (size_t)lfam::arith::unit_group((u64)q)->phi; });
}

lfam_status lfam_character_get(int64_t q, size_t index, lfam_character** out) {
  if (!out) return usage("lfam_character_get: null output");
  *out = nullptr;
  if (q < 3) return usage("lfam_character_get: q >= 3 required");
  return guard([&] {
    auto all = lfam::chars::enumerate_characters((u64)q);
    if (index >= all.size()) throw lfam::domain_error("lfam_character_get: index beyond phi(q)");
    *out = new lfam_character{std::move(all[index])};
  });
}

lfam_status lfam_character_conjugate(const lfam_character* chi, lfam_character** out) {
  if (!chi || !out) return usage("lfam_character_conjugate: null argument");
  *out = nullptr;
  return guard([&] { *out = new lfam_character{chi->impl.conjugate()}; });
}

void lfam_character_free(lfam_character* chi) { delete chi; }

int64_t lfam_character_modulus(const lfam_character* chi) {
  return chi ? (int64_t)chi->impl.modulus() : 0;
}

int64_t lfam_character_order(const lfam_character* chi) {
  return chi ? (int64_t)chi->impl.order() : 0;
}

int lfam_character_parity(const lfam_character* chi) { return chi ? chi->impl.parity() : -1; }

int64_t lfam_character_conductor(const lfam_character* chi) {
  return chi ? (int64_t)chi->impl.conductor() : 0;
}

int lfam_character_is_primitive(const lfam_character* chi) {
  return chi && chi->impl.is_primitive() ? 1 : 0;
}

lfam_status lfam_character_exponents(const lfam_character* chi, int64_t* buf, size_t cap,
                                     size_t* count) {
  if (!chi || !count || (cap && !buf)) return usage("lfam_character_exponents: null argument");
  const auto& e = chi->impl.exponents();
  *count = e.size();
  for (std::size_t i = 0; i < e.size() && i < cap; ++i) buf[i] = e[i];
  return LFAM_OK;
}

lfam_status lfam_character_value(const lfam_character* chi, int64_t n, lfam_complex* out) {
  if (!chi || !out) return usage("lfam_character_value: null argument");
  return guard([&] { *out = to_c(chi->impl.value(n)); });
}

lfam_status lfam_gauss_sum(const lfam_character* chi, lfam_complex* out) {
  if (!chi || !out) return usage("lfam_gauss_sum: null argument");
  return guard([&] { *out = to_c(lfam::chars::gauss_sum(chi->impl)); });
}

lfam_status lfam_root_number(const lfam_character* chi, lfam_complex* out) {
  if (!chi || !out) return usage("lfam_root_number: null argument");
  return guard([&] { *out = to_c(lfam::chars::root_number(chi->impl)); });
}

lfam_status lfam_family_enumerate(lfam_ctx* ctx, int order_j, double Q, lfam_family** out) {
  if (!out) return usage("lfam_family_enumerate: null output");
  *out = nullptr;
  return guard([&] {
    auto fam = std::make_unique<lfam_family>();
    fam->impl = lfam::chars::enumerate_family(order_j, Q, ctx ? ctx->workers : 1);
    fam->wrappers.reserve(fam->impl.members.size());
    for (auto& chi : fam->impl.members) fam->wrappers.push_back(lfam_character{chi});
    *out = fam.release();
  });
}

void lfam_family_free(lfam_family* fam) { delete fam; }

size_t lfam_family_size(const lfam_family* fam) { return fam ? fam->impl.members.size() : 0; }

const lfam_character* lfam_family_get(const lfam_family* fam, size_t index) {
  if (!fam || index >= fam->wrappers.size()) return nullptr;
  return &fam->wrappers[index];
}

/* --- L-function evaluation --------------------------------------------- */

lfam_status lfam_hurwitz_zeta(lfam_ctx* ctx, double sigma, double t, double a,
                              lfam_eval_result* out) {
  if (!out) return usage("lfam_hurwitz_zeta: null output");
  return guard([&] {
    auto r = lfam::lfunc::hurwitz_zeta({sigma, t}, a, ctx ? ctx->eval : lfam::lfunc::Options{});
    fill_eval(r, out);
  });
}

lfam_status lfam_l_value(lfam_ctx* ctx, const lfam_character* chi, double sigma, double t,
                         int method, lfam_eval_result* out) {
  if (!chi || !out) return usage("lfam_l_value: null argument");
  if (method != LFAM_METHOD_HURWITZ_ORACLE && method != LFAM_METHOD_SMOOTHED_AFE)
    return usage("lfam_l_value: unknown method");
  return guard([&] {
    auto r = lfam::lfunc::l_value({sigma, t}, chi->impl,
                                  method == LFAM_METHOD_HURWITZ_ORACLE
                                      ? lfam::lfunc::Method::hurwitz_oracle
                                      : lfam::lfunc::Method::smoothed_afe,
                                  ctx ? ctx->eval : lfam::lfunc::Options{});
    fill_eval(r, out);
  });
}

lfam_status lfam_l_derivative(lfam_ctx* ctx, const lfam_character* chi, double sigma, double t,
                              lfam_eval_result* out) {
  if (!chi || !out) return usage("lfam_l_derivative: null argument");
  return guard([&] {
    auto r =
        lfam::lfunc::l_derivative({sigma, t}, chi->impl, ctx ? ctx->eval : lfam::lfunc::Options{});
    fill_eval(r, out);
  });
}

lfam_status lfam_mollifier_coefficients(double X, int64_t nmax, int64_t* coeffs) {
  if (!coeffs) return usage("lfam_mollifier_coefficients: null buffer");
  if (nmax < 1) return usage("lfam_mollifier_coefficients: nmax >= 1 required");
  return guard([&] {
    auto mc = lfam::lfunc::mollifier_coefficients(X, (u64)nmax);
    for (std::size_t i = 1; i <= (std::size_t)nmax; ++i) coeffs[i] = mc.m[i];
  });
}

lfam_status lfam_smoothed_power_sum(lfam_ctx* ctx, const lfam_character* chi, double sigma,
                                    double t, int k, double U, lfam_complex* out) {
  if (!chi || !out) return usage("lfam_smoothed_power_sum: null argument");
  (void)ctx;
  return guard([&] { *out = to_c(lfam::lfunc::smoothed_power_sum(chi->impl, {sigma, t}, k, U)); });
}

lfam_status lfam_mellin_identity_residual(lfam_ctx* ctx, const lfam_character* chi, double sigma,
                                          double t, int k, double U, double c_offset,
                                          double* residual) {
  if (!chi || !residual) return usage("lfam_mellin_identity_residual: null argument");
  return guard([&] {
    *residual = lfam::lfunc::mellin_identity_residual(chi->impl, {sigma, t}, k, U, c_offset, 1e-8,
                                                      ctx ? ctx->eval : lfam::lfunc::Options{});
  });
}

/* --- moments ------------------------------------------------------------ */

lfam_status lfam_family_moment_fixed_t(lfam_ctx* ctx, const lfam_family* fam, double t, int k,
                                       lfam_moment_report* out, double* per_character) {
  if (!fam || !out) return usage("lfam_family_moment_fixed_t: null argument");
  return guard([&] {
    auto rep = lfam::moments::family_moment_fixed_t(fam->impl, t, k, moment_options(ctx));
    fill_moment_report(rep, out, per_character);
  });
}

lfam_status lfam_integrated_family_moment(lfam_ctx* ctx, const lfam_family* fam, double T, int k,
                                          double tol, lfam_moment_report* out,
                                          double* per_character) {
  if (!fam || !out) return usage("lfam_integrated_family_moment: null argument");
  return guard([&] {
    auto rep = lfam::moments::integrated_family_moment(fam->impl, T, k, tol, moment_options(ctx));
    fill_moment_report(rep, out, per_character);
  });
}

lfam_status lfam_generate_wellspaced(lfam_ctx* ctx, const lfam_character* chi, double T,
                                     double delta, int strategy, double* points, size_t cap,
                                     size_t* count) {
  if (!chi || !count || (cap && !points)) return usage("lfam_generate_wellspaced: null argument");
  if (strategy != LFAM_SPACING_GRID && strategy != LFAM_SPACING_GREEDY)
    return usage("lfam_generate_wellspaced: unknown strategy");
  return guard([&] {
    auto set = lfam::moments::generate_wellspaced(
        chi->impl, T, delta,
        strategy == LFAM_SPACING_GRID ? lfam::moments::SpacingStrategy::grid
                                      : lfam::moments::SpacingStrategy::greedy_local_maxima,
        moment_options(ctx));
    *count = set.points.size();
    for (std::size_t i = 0; i < set.points.size() && i < cap; ++i) points[i] = set.points[i];
  });
}

lfam_status lfam_discrete_family_moment(lfam_ctx* ctx, const lfam_family* fam, double T,
                                        double delta, const double* const* sets,
                                        const size_t* set_sizes, int k, lfam_moment_report* out,
                                        double* per_character) {
  if (!fam || !out || !sets || !set_sizes)
    return usage("lfam_discrete_family_moment: null argument");
  return guard([&] {
    std::vector<lfam::moments::WellSpacedSet> ws(fam->impl.members.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
      ws[i].delta = delta;
      ws[i].T = T;
      ws[i].points.assign(sets[i], sets[i] + set_sizes[i]);
    }
    auto rep = lfam::moments::discrete_family_moment(fam->impl, ws, k, ctx ? ctx->quad_tol : 1e-6,
                                                     moment_options(ctx));
    fill_moment_report(rep, out, per_character);
  });
}

lfam_status lfam_hardy_littlewood(lfam_ctx* ctx, double T, double tol, double* value,
                                  double* ratio_tlogt, double* ratio_refined,
                                  double* quadrature_error) {
  if (!value) return usage("lfam_hardy_littlewood: null output");
  return guard([&] {
    auto rep = lfam::moments::hardy_littlewood_second_moment(T, tol, moment_options(ctx));
    *value = rep.value;
    if (ratio_tlogt) *ratio_tlogt = rep.ratio_tlogt;
    if (ratio_refined) *ratio_refined = rep.ratio_refined;
    if (quadrature_error) *quadrature_error = rep.quadrature_error;
  });
}

lfam_status lfam_exponent_fit(const double* Q, const double* T, const double* value, size_t n,
                              double* alpha, double* beta, double* intercept,
                              double* max_residual) {
  if (!Q || !T || !value || !alpha || !beta) return usage("lfam_exponent_fit: null argument");
  return guard([&] {
    std::vector<lfam::moments::ScalingSample> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = {Q[i], T[i], value[i]};
    auto fit = lfam::moments::exponent_fit(samples);
    *alpha = fit.alpha;
    *beta = fit.beta;
    if (intercept) *intercept = fit.c;
    if (max_residual) *max_residual = fit.max_residual;
  });
}

lfam_status lfam_lemma31_comparison(lfam_ctx* ctx, const lfam_family* fam, double T, double t,
                                    double eps, double* lhs, double* rhs, double* N,
                                    int* degenerate) {
  if (!fam || !lhs || !rhs) return usage("lfam_lemma31_comparison: null argument");
  return guard([&] {
    auto rep = lfam::moments::lemma31_comparison(fam->impl, T, t, eps, moment_options(ctx));
    *lhs = rep.lhs;
    *rhs = rep.rhs;
    if (N) *N = rep.N;
    if (degenerate) *degenerate = rep.degenerate ? 1 : 0;
  });
}

/* --- large sieve --------------------------------------------------------- */

lfam_status lfam_delta_bound(int j, double Q, double T, double N, double* out) {
  if (!out) return usage("lfam_delta_bound: null output");
  return guard([&] { *out = lfam::sieve::delta_bound(j, Q, T, N); });
}

lfam_status lfam_sieve_discrete(lfam_ctx* ctx, const lfam_family* fam, double N, uint64_t seed,
                                lfam_sieve_report* out) {
  if (!fam || !out) return usage("lfam_sieve_discrete: null argument");
  return guard([&] {
    auto cv = lfam::sieve::random_unit_vector(N, seed);
    auto rep = lfam::sieve::sieve_lhs_discrete(fam->impl, cv, ctx ? ctx->workers : 1);
    fill_sieve_report(rep, out);
  });
}

lfam_status lfam_sieve_discrete_coeffs(lfam_ctx* ctx, const lfam_family* fam, double N,
                                       const int64_t* idx, const lfam_complex* coef, size_t count,
                                       lfam_sieve_report* out) {
  if (!fam || !out || !idx || !coef) return usage("lfam_sieve_discrete_coeffs: null argument");
  return guard([&] {
    lfam::sieve::CoefficientVector cv;
    cv.N = N;
    cv.entries = coeff_pairs(idx, coef, count);
    auto rep = lfam::sieve::sieve_lhs_discrete(fam->impl, cv, ctx ? ctx->workers : 1);
    fill_sieve_report(rep, out);
  });
}

lfam_status lfam_sieve_integrated(lfam_ctx* ctx, const lfam_family* fam, double T, double N,
                                  uint64_t seed, lfam_sieve_report* out) {
  if (!fam || !out) return usage("lfam_sieve_integrated: null argument");
  return guard([&] {
    auto cv = lfam::sieve::random_unit_vector(N, seed);
    auto rep = lfam::sieve::sieve_lhs_integrated(fam->impl, T, cv, ctx ? ctx->workers : 1);
    fill_sieve_report(rep, out);
  });
}

lfam_status lfam_gallagher_l(lfam_ctx* ctx, const lfam_character* chi, double T, double delta,
                             const double* points, size_t npoints, double* lhs, double* rhs,
                             double* int_f2, double* int_df2, int* holds) {
  if (!chi || !lhs || !rhs || !holds || (npoints && !points))
    return usage("lfam_gallagher_l: null argument");
  return guard([&] {
    lfam::moments::WellSpacedSet set;
    set.delta = delta;
    set.T = T;
    set.points.assign(points, points + npoints);
    auto rep = lfam::sieve::gallagher_check_l(chi->impl, T, delta, set, moment_options(ctx));
    *lhs = rep.lhs;
    *rhs = rep.rhs;
    if (int_f2) *int_f2 = rep.int_f2;
    if (int_df2) *int_df2 = rep.int_df2;
    *holds = rep.holds ? 1 : 0;
  });
}

lfam_status lfam_gallagher_poly(lfam_ctx* ctx, const lfam_character* chi, double T, double delta,
                                const double* points, size_t npoints, const int64_t* idx,
                                const lfam_complex* coef, size_t count, double* lhs, double* rhs,
                                double* int_f2, double* int_df2, int* holds) {
  if (!lhs || !rhs || !holds || (npoints && !points) || !idx || !coef)
    return usage("lfam_gallagher_poly: null argument");
  (void)ctx;
  return guard([&] {
    lfam::moments::WellSpacedSet set;
    set.delta = delta;
    set.T = T;
    set.points.assign(points, points + npoints);
    auto pairs = coeff_pairs(idx, coef, count);
    auto rep = lfam::sieve::gallagher_check_poly(pairs, chi ? &chi->impl : nullptr, T, delta, set);
    *lhs = rep.lhs;
    *rhs = rep.rhs;
    if (int_f2) *int_f2 = rep.int_f2;
    if (int_df2) *int_df2 = rep.int_df2;
    *holds = rep.holds ? 1 : 0;
  });
}

lfam_status lfam_meanvalue(lfam_ctx* ctx, const lfam_family* fam, double T, double delta,
                           double sigma0, double N, uint64_t seed, double* lhs, double* rhs_delta,
                           double* rhs_montgomery, long long* point_count) {
  if (!fam || !lhs) return usage("lfam_meanvalue: null argument");
  return guard([&] {
    auto pts = meanvalue_points(fam->impl, T, delta, sigma0, seed);
    // seeded unit coefficients on the squarefree n <= N
    lfam::splitmix64 rng(seed ^ 0xc0ffee1234567890ULL);
    std::vector<std::pair<u64, cplx>> coeffs;
    auto mu = lfam::arith::moebius_sieve((u64)N);
    for (u64 n = 1; (double)n <= N; ++n) {
      if (mu[n] == 0) continue;
      coeffs.push_back({n, lfam::unit_phase(lfam::TWO_PI * rng.next_unit())});
    }
    auto rep = lfam::sieve::meanvalue_check(fam->impl, T, delta, sigma0, pts, coeffs, N,
                                            ctx ? ctx->workers : 1);
    *lhs = rep.lhs;
    if (rhs_delta) *rhs_delta = rep.rhs_delta;
    if (rhs_montgomery) *rhs_montgomery = rep.rhs_montgomery;
    if (point_count) *point_count = rep.point_count;
  });
}

/* --- zeros --------------------------------------------------------------- */

lfam_status lfam_count_zeros_rectangle(lfam_ctx* ctx, const lfam_character* chi, double sigma,
                                       double T, long long* count, double* winding_residual) {
  if (!chi || !count) return usage("lfam_count_zeros_rectangle: null argument");
  return guard([&] {
    auto rep = lfam::zeros::count_zeros_rectangle(chi->impl, sigma, T, zero_options(ctx));
    *count = rep.count;
    if (winding_residual) *winding_residual = rep.winding_residual;
  });
}

lfam_status lfam_critical_line_zeros(lfam_ctx* ctx, const lfam_character* chi, double T,
                                     lfam_zero_list** out) {
  if (!chi || !out) return usage("lfam_critical_line_zeros: null argument");
  *out = nullptr;
  return guard([&] {
    auto zeros = lfam::zeros::critical_line_zeros(chi->impl, T, zero_options(ctx));
    *out = new lfam_zero_list{std::move(zeros)};
  });
}

void lfam_zero_list_free(lfam_zero_list* zl) { delete zl; }

size_t lfam_zero_list_size(const lfam_zero_list* zl) { return zl ? zl->zeros.size() : 0; }

lfam_status lfam_zero_list_get(const lfam_zero_list* zl, size_t index, double* gamma,
                               double* width) {
  if (!zl || !gamma) return usage("lfam_zero_list_get: null argument");
  if (index >= zl->zeros.size()) return usage("lfam_zero_list_get: index out of range");
  *gamma = zl->zeros[index].gamma;
  if (width) *width = zl->zeros[index].width;
  return LFAM_OK;
}

lfam_status lfam_detector_check(lfam_ctx* ctx, const lfam_character* chi, double gamma, double X,
                                double Y, double C, lfam_detector_report* out) {
  if (!chi || !out) return usage("lfam_detector_check: null argument");
  return guard([&] {
    lfam::zeros::CriticalZero z{gamma, 0.0};
    auto rep = lfam::zeros::detector_check(chi->impl, z, X, Y, C, 1e-8, zero_options(ctx));
    out->gamma = rep.zero.gamma;
    out->X = rep.X;
    out->Y = rep.Y;
    out->C = rep.C;
    out->r1_value = rep.r1_value;
    out->r2_value = rep.r2_value;
    out->identity_residual = rep.identity_residual;
    out->residue_magnitude = rep.residue_magnitude;
    switch (rep.cls) {
      case lfam::zeros::DetectorClass::r1:
        out->cls = LFAM_DETECTOR_R1;
        break;
      case lfam::zeros::DetectorClass::r2:
        out->cls = LFAM_DETECTOR_R2;
        break;
      case lfam::zeros::DetectorClass::both:
        out->cls = LFAM_DETECTOR_BOTH;
        break;
      default:
        out->cls = LFAM_DETECTOR_NEITHER;
        break;
    }
  });
}

size_t lfam_zero_density_bound_count(void) { return 8; }

const char* lfam_zero_density_bound_name(size_t index) {
  static const char* names[8] = {"o2_jutila",        "o2_fourth_moment", "o2_second_moment",
                                 "o3_fourth_moment", "o4_fourth_moment", "o3_second_moment",
                                 "o4_second_moment", "v_parameter"};
  return index < 8 ? names[index] : nullptr;
}

lfam_status lfam_zero_density_bounds(double sigma, double Q, double T, double* values,
                                     size_t count) {
  if (!values) return usage("lfam_zero_density_bounds: null output");
  if (count < lfam_zero_density_bound_count())
    return usage("lfam_zero_density_bounds: buffer too small");
  return guard([&] {
    auto rows = lfam::zeros::zero_density_bounds(sigma, Q, T);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::string(lfam_zero_density_bound_name(i)) != rows[i].first)
        throw lfam::internal_error("zero_density_bounds: name table out of sync");
      values[i] = rows[i].second;
    }
  });
}

lfam_status lfam_family_zero_count(lfam_ctx* ctx, const lfam_family* fam, double sigma, double T,
                                   long long* total, long long* per_character,
                                   double* winding_residuals) {
  if (!fam || !total) return usage("lfam_family_zero_count: null argument");
  return guard([&] {
    auto rep = lfam::zeros::family_zero_count(fam->impl, sigma, T, zero_options(ctx));
    *total = rep.total;
    for (std::size_t i = 0; i < rep.per_character.size(); ++i) {
      if (per_character) per_character[i] = rep.per_character[i].count;
      if (winding_residuals) winding_residuals[i] = rep.per_character[i].winding_residual;
    }
  });
}

} /* extern "C" */
