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

#ifndef LFAM_NUMERIC_HPP
#define LFAM_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace lfam {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846;
inline constexpr double TWO_PI = 6.28318530717958647692;
inline constexpr double EULER_GAMMA = 0.57721566490153286061;

// Neumaier-compensated accumulator.  Summation order is part of the
// determinism contract, so callers must feed terms in a fixed order.
class kahan_sum {
public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class kahan_csum {
public:
  void add(const cplx& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

private:
  kahan_sum re_, im_;
};

// exp(i*phi) with conjugation symmetry exact at the bit level:
// unit_phase(-phi) is the bitwise conjugate of unit_phase(phi).
inline cplx unit_phase(double phi) {
  double a = std::abs(phi);
  double c = std::cos(a);
  double s = std::sin(a);
  return {c, phi < 0 ? -s : s};
}

// n^{-s} for real n > 0, routed through unit_phase so conjugating s
// conjugates the result exactly.
inline cplx pow_neg_s(double log_n, double sigma, double t) {
  double r = std::exp(-sigma * log_n);
  return r * unit_phase(-t * log_n);
}

// Principal-branch log Gamma for complex z (Lanczos, g=7).
cplx log_gamma(cplx z);

inline cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

// 16-point Gauss-Legendre rule on [-1,1].
struct gl16 {
  static const double node[16];
  static const double weight[16];
};

// Integrate f over [a,b] with one 16-point panel.
template <class F>
auto gl16_panel(F&& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  using R = decltype(f(mid));
  R acc{};
  for (int i = 0; i < 16; ++i)
    acc += gl16::weight[i] * f(mid + half * gl16::node[i]);
  return half * acc;
}

// Adaptive panel integration of a complex integrand over [a,b].  A panel is
// accepted when it agrees with its two halves to abs_tol scaled by the panel
// share of the interval; err accumulates the accepted disagreements.
// Deterministic: depth-first, left to right.
struct quad_result {
  cplx value;
  double err;
  long long evals;
};

quad_result integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                               double initial_width, double abs_tol, int max_depth = 24);

// splitmix64: tiny fully-specified PRNG so seeded runs are reproducible
// across platforms and standard libraries.
class splitmix64 {
public:
  explicit splitmix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0,1).
  double next_unit() { return (next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

}  // namespace lfam

#endif
