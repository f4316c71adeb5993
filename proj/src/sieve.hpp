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

#ifndef LFAM_SIEVE_HPP
#define LFAM_SIEVE_HPP

#include <vector>

#include "characters.hpp"
#include "moments.hpp"

namespace lfam::sieve {

using arith::i64;
using arith::u64;
using chars::CharacterFamily;
using chars::DirichletCharacter;
using moments::WellSpacedSet;

// Coefficients supported on squarefree n in (N, 2N].
struct CoefficientVector {
  double N = 1;
  std::vector<std::pair<u64, cplx>> entries;  // sorted by n
  u64 seed = 0;                                // 0: hand-built

  double norm2() const;
  void validate() const;
};

// Unit-modulus coefficients with seeded uniform phases on every squarefree
// n in (N, 2N].
CoefficientVector random_unit_vector(double N, u64 seed);

// The density factor for the family of order-j characters:
//   j = 2:    QT + N
//   j = 3, 6: min(Q^{5/3}T+N, Q^{4/3}T+Q^{1/2}N, Q^{11/9}T+Q^{2/3}N,
//                 QT+Q^{1/3}N^{5/3}T^{-2/3}+N^{12/5}T^{-7/5})
//   j = 4:    min(Q^{3/2}T+N, Q^{5/4}T+Q^{1/2}N, Q^{7/6}T+Q^{2/3}N,
//                 QT+Q^{1/3}N^{5/3}T^{-2/3}+N^{7/3}T^{-4/3})
double delta_bound(int j, double Q, double T, double N);

enum class SieveMode { discrete, integrated };

struct SieveReport {
  int j = 0;
  double Q = 0, T = 0, N = 0;
  double lhs = 0;
  double norm = 0;
  double bound = 0;  // delta_bound(j, Q, T, N) (T = 1 in discrete mode)
  double ratio = 0;  // lhs / (norm * bound)
  SieveMode mode = SieveMode::discrete;
  long long family_size = 0;
  u64 seed = 0;
};

// sum over the family of |sum_n a_n chi(n)|^2.
SieveReport sieve_lhs_discrete(const CharacterFamily& fam, const CoefficientVector& coeffs,
                               unsigned workers = 1);

// sum over the family of the integral over [-T,T] of |sum a_n chi(n) n^{-it}|^2,
// assembled from the closed-form kernel (2T on the diagonal,
// 2 sin(T log(n/m)) / log(n/m) off it).  No quadrature.
SieveReport sieve_lhs_integrated(const CharacterFamily& fam, double T,
                                 const CoefficientVector& coeffs, unsigned workers = 1);

double integrated_kernel(u64 n, u64 m, double T);

struct GallagherReport {
  double lhs = 0;
  double rhs = 0;
  double int_f2 = 0;   // integral of |f|^2 over [-T,T]
  double int_df2 = 0;  // integral of |f'|^2
  bool holds = false;  // lhs <= rhs + 1e-6 rhs
};

// f(t) = L(1/2 + it, chi).
GallagherReport gallagher_check_l(const DirichletCharacter& chi, double T, double delta,
                                  const WellSpacedSet& set, const moments::Options& opt = {});

// f(t) = sum_n c_n n^{-it} with c_n = a_n chi(n) (chi optional); both
// integrals come from the closed-form kernel.
GallagherReport gallagher_check_poly(const std::vector<std::pair<u64, cplx>>& coeffs,
                                     const DirichletCharacter* chi, double T, double delta,
                                     const WellSpacedSet& set);

struct MeanValueReport {
  double lhs = 0;
  double rhs_delta = 0;     // (1/delta+1) * Delta_j(Q,T,N) * damped norm
  double rhs_montgomery = 0;  // (1/delta+1) * (N + Q T^{1/2} |S(Q)|) * damped norm
  double damped_norm = 0;
  long long point_count = 0;
  double ratio_delta = 0;
  double ratio_montgomery = 0;
};

// Points are per-character lists of (sigma_t, t); t-lists must be
// delta-well-spaced inside [delta/2-T, T-delta/2] and sigma_t in [sigma0, 1).
// Coefficients run over squarefree n <= N.  Ratios only; no assertion.
MeanValueReport meanvalue_check(const CharacterFamily& fam, double T, double delta, double sigma0,
                                const std::vector<std::vector<std::pair<double, double>>>& points,
                                const std::vector<std::pair<u64, cplx>>& coeffs, double N,
                                unsigned workers = 1);

}  // namespace lfam::sieve

#endif
