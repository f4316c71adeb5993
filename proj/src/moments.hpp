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

#ifndef LFAM_MOMENTS_HPP
#define LFAM_MOMENTS_HPP

#include <span>
#include <vector>

#include "characters.hpp"
#include "lfunc.hpp"

namespace lfam::moments {

using chars::CharacterFamily;
using chars::DirichletCharacter;

// A finite set of points in [delta/2 - T, T - delta/2] with pairwise gaps
// at least delta.
struct WellSpacedSet {
  double delta = 1.0;
  double T = 1.0;
  std::vector<double> points;  // sorted ascending

  void validate() const;  // throws domain_error naming the offending pair
};

enum class SpacingStrategy { grid, greedy_local_maxima };

struct MomentReport {
  int j = 0;
  double Q = 0;
  double T = 0;        // 0 for fixed-t reports
  double t = 0;        // the fixed ordinate, when applicable
  int k = 1;
  double delta = 0;    // 0 when not a discrete report
  double value = 0;
  double quadrature_error = 0;
  long long family_size = 0;
  std::vector<double> per_character;
  // For discrete reports: (1/delta + 1) * integrated moment, for comparison.
  double integrated_comparison = 0;
};

struct Options {
  lfunc::Options eval;
  unsigned workers = 1;
};

// sum over the family of |L(1/2 + it, chi)|^{2k}.
MomentReport family_moment_fixed_t(const CharacterFamily& fam, double t, int k,
                                   const Options& opt = {});

// sum over the family of the integral over [-T, T] of |L(1/2+it,chi)|^{2k} dt
// by panel-adaptive Gauss-Legendre; quadrature_error <= tol * value or the
// call raises accuracy_error carrying the partial estimate.
MomentReport integrated_family_moment(const CharacterFamily& fam, double T, int k, double tol,
                                      const Options& opt = {});

// double sum over per-character well-spaced sets (sets aligned with
// fam.members); all sets must share T and delta.
MomentReport discrete_family_moment(const CharacterFamily& fam,
                                    const std::vector<WellSpacedSet>& sets, int k,
                                    double integrated_tol = 1e-4, const Options& opt = {});

WellSpacedSet generate_wellspaced(const DirichletCharacter& chi, double T, double delta,
                                  SpacingStrategy strategy, const Options& opt = {});

struct HardyLittlewoodReport {
  double T = 0;
  double value = 0;
  double quadrature_error = 0;
  double ratio_tlogt = 0;    // value / (T log T)
  double ratio_refined = 0;  // value / (T (log(T/2pi) + 2 gamma - 1))
};

HardyLittlewoodReport hardy_littlewood_second_moment(double T, double tol,
                                                     const Options& opt = {});

struct ScalingSample {
  double Q = 0, T = 0, value = 0;
};

struct ScalingFit {
  double alpha = 0;  // exponent in Q
  double beta = 0;   // exponent in T
  double c = 0;      // log-intercept
  double max_residual = 0;
};

// least squares of log value ~ c + alpha log Q + beta log T; needs >= 4
// samples spanning >= 2 distinct Q and >= 2 distinct T.
ScalingFit exponent_fit(std::span<const ScalingSample> samples);

struct Lemma31Report {
  double lhs = 0;
  double rhs = 0;
  double N = 0;
  bool degenerate = false;  // N < 1: rhs empty
};

// lhs = sum_chi |L(1/2+it,chi)|^2; rhs = the ell-decomposed squarefree block
// sum with N = (QT)^{1/2+eps}.  Ratio only; the lemma's constant is unknown.
Lemma31Report lemma31_comparison(const CharacterFamily& fam, double T, double t, double eps,
                                 const Options& opt = {});

// Shared positive-integrand quadrature: integrates f over [a,b] with
// per-character panel width and eval-error propagation.  Used by moments and
// the Gallagher check.
struct PositiveIntegral {
  double value = 0;
  double err = 0;  // quadrature disagreement + integrated evaluator error
};

PositiveIntegral integrate_positive(const std::function<std::pair<double, double>(double)>& f,
                                    double a, double b, double initial_width, double rel_tol);

}  // namespace lfam::moments

#endif
