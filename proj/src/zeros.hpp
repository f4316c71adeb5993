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

#ifndef LFAM_ZEROS_HPP
#define LFAM_ZEROS_HPP

#include <string>
#include <vector>

#include "characters.hpp"
#include "lfunc.hpp"

namespace lfam::zeros {

using chars::CharacterFamily;
using chars::DirichletCharacter;

struct Options {
  lfunc::Options eval;
  unsigned workers = 1;
  double grid_scale = 1.0;  // < 1 tightens every contour/scan step (0.5 = halved rerun)
};

struct ZeroCountReport {
  double sigma = 0;
  double T = 0;
  long long count = 0;
  double winding_residual = 0;
  double right_edge = 1.5;  // contour extends into the zero-free half plane
};

// Winding number of L(s,chi) around the rectangle [sigma, 1.5] x [-T, T],
// tracked with per-step phase change < pi/2.  A residual >= 0.25 or a phase
// step that stays too large at the minimum step size raises accuracy_error
// (the caller may perturb sigma and retry).
ZeroCountReport count_zeros_rectangle(const DirichletCharacter& chi, double sigma, double T,
                                      const Options& opt = {});

struct CriticalZero {
  double gamma = 0;
  double width = 0;  // final bisection bracket width
};

// All sign changes of Re[eps(chi)^{-1/2} Lambda(1/2+it,chi)] on [-T, T],
// refined by bisection to width 1e-8.  grid_offset shifts the scan grid by
// that fraction of a step (used by the re-detection check).
std::vector<CriticalZero> critical_line_zeros(const DirichletCharacter& chi, double T,
                                              const Options& opt = {}, double grid_offset = 0.0);

enum class DetectorClass { r1, r2, both, neither };

struct DetectorReport {
  CriticalZero zero;
  double X = 0, Y = 0, C = 0;
  double r1_value = 0;
  double r2_value = 0;
  double identity_residual = 0;
  // |M_X(rho,chi) L(rho,chi)|, the Gamma-pole residue kept by the shift;
  // ~0 at a genuine zero, and exactly what the sum-minus-integral gap
  // becomes when the point is not a zero.
  double residue_magnitude = 0;
  DetectorClass cls = DetectorClass::neither;
};

// Zero-detector diagnostics at a critical-line zero rho = 1/2 + i gamma:
//   r1 = |sum_{X < n <= Y^2} m_{X,n} chi(n) n^{-rho} e^{-n/Y}|
//   r2 = (1/2pi) |Int_{-C log qT}^{C log qT} M_X L(1/2+i(gamma+u)) Gamma(iu) Y^{iu} du|
// and the residual of the smoothed Mellin identity, with the contour shifted
// to Re w = -1/4 and the Gamma-pole residue M_X(rho,chi) L(rho,chi) kept
// explicitly.  Classification compares r1, r2 to the 1/6 threshold.
DetectorReport detector_check(const DirichletCharacter& chi, const CriticalZero& zero, double X,
                              double Y, double C, double tol = 1e-8, const Options& opt = {});

// Every zero-density bound formula for the families, evaluated exactly:
// rows are named by family and by the moment power the bound was derived
// from ("second_moment" rows come from the mean-square results, the rest
// from fourth-moment literature).  v_parameter records the choice
// Q^{(4 sigma-3)/2} T^{(3 sigma-2)/2}; it drives no computation.
std::vector<std::pair<std::string, double>> zero_density_bounds(double sigma, double Q, double T);

struct FamilyZeroCount {
  long long total = 0;
  std::vector<ZeroCountReport> per_character;
  std::vector<std::pair<std::string, double>> bounds;
};

// sum over the family of N(sigma, T, chi); each character counted at both
// the base grid and the halved grid, which must agree.  Near-zero contour
// failures retry with sigma perturbed by +-1e-4.
FamilyZeroCount family_zero_count(const CharacterFamily& fam, double sigma, double T,
                                  const Options& opt = {});

}  // namespace lfam::zeros

#endif
