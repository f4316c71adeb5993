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

#ifndef LFAM_LFUNC_HPP
#define LFAM_LFUNC_HPP

#include <span>
#include <utility>
#include <vector>

#include "characters.hpp"
#include "numeric.hpp"

namespace lfam::lfunc {

using arith::i64;
using arith::u64;
using chars::DirichletCharacter;

struct SPoint {
  double sigma = 0.5;
  double t = 0.0;
  cplx s() const { return {sigma, t}; }
};

enum class Method { hurwitz_oracle, smoothed_afe };

struct EvalResult {
  cplx value{0.0, 0.0};
  double abs_error_bound = 0.0;
  long long terms_used = 0;
  Method method = Method::hurwitz_oracle;
};

struct Options {
  double tol = 1e-12;      // target absolute error for oracle evaluations
  double t_cap = 200.0;    // Euler-Maclaurin reach in |t|
  double afe_cap = 1e5;    // largest admissible q*(|t|+1) for the smoothed path
};

// zeta(s, a) = sum_{n>=0} (n+a)^{-s} by Euler-Maclaurin with N = max(2*ceil|t|, 30)
// nodes and B_2..B_20 corrections.  The remainder bound is computed, not
// assumed; if it misses opt.tol the call raises accuracy_error.
EvalResult hurwitz_zeta(SPoint s, double a, const Options& opt = {});

// Same sum with d/ds carried through every term; returns (value, derivative).
std::pair<EvalResult, EvalResult> hurwitz_zeta_jet(SPoint s, double a, const Options& opt = {});

// Trusted path: L(s,chi) = q^{-s} sum_a chi(a) zeta(s, a/q).  chi_table, when
// given, must hold chi(a) for a in [0,q).  Principal characters are evaluated
// through zeta(s) times the local Euler factors (s != 1).
EvalResult l_value_oracle(SPoint s, const DirichletCharacter& chi, const Options& opt = {},
                          const std::vector<cplx>* chi_table = nullptr);

// Fast path: smoothed two-sum approximate functional equation.  The cutoff
// weights V(n) are Mellin integrals of Gamma((s+kappa+w)/2)/Gamma((s+kappa)/2)
// against the kernel e^{beta w^2}/w on Re w = 2, and the second sum carries
// root_number(chi) and conjugate character values.  Requires chi primitive,
// 0 < sigma < 1 and q(|t|+1) <= opt.afe_cap.
EvalResult l_value_afe(SPoint s, const DirichletCharacter& chi, double tol,
                       const Options& opt = {});

EvalResult l_value(SPoint s, const DirichletCharacter& chi, Method m, const Options& opt = {},
                   const std::vector<cplx>* chi_table = nullptr);

// dL/ds via the term-differentiated Euler-Maclaurin series, cross-checked
// against a central finite difference (step 1e-4); disagreement beyond 1e-6
// raises accuracy_error.
EvalResult l_derivative(SPoint s, const DirichletCharacter& chi, const Options& opt = {},
                        bool crosscheck = true);

// Completed function Lambda(s,chi) = (q/pi)^{(s+kappa)/2} Gamma((s+kappa)/2) L(s,chi).
cplx completed_l(SPoint s, const DirichletCharacter& chi, const Options& opt = {});

// sum a_n chi(n) n^{-s} over the finite support, ascending n, compensated.
// chi == nullptr means the plain polynomial (chi(n) replaced by 1).
cplx dirichlet_polynomial(std::span<const std::pair<u64, cplx>> coeffs, SPoint s,
                          const DirichletCharacter* chi);

// Coefficients of M_X(s,chi) L(s,chi): m[n] = sum_{d | n, d <= X} mu(d).
// m[1] = 1, m[n] = 0 for 1 < n <= X, |m[n]| <= tau(n).
struct MollifierCoefficients {
  double X = 2;
  u64 nmax = 0;
  std::vector<i64> m;  // index n in [1, nmax]; m[0] unused
};

MollifierCoefficients mollifier_coefficients(double X, u64 nmax);

// sum_n tau_k(n) chi(n) n^{-s} e^{-n/U}, truncated once tau_k(n) e^{-n/U} < 1e-14.
cplx smoothed_power_sum(const DirichletCharacter& chi, SPoint s, int k, double U);

// | L(s,chi)^k - smoothed_power_sum + (1/2 pi i) Int L(w,chi)^k Gamma(w-s) U^{w-s} dw |
// with the contour on Re w = sigma + c_offset, c_offset in (-1,0).
double mellin_identity_residual(const DirichletCharacter& chi, SPoint s, int k, double U,
                                double c_offset, double tol = 1e-8, const Options& opt = {});

}  // namespace lfam::lfunc

#endif
