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

#include "moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace lfam::moments {

using arith::i64;
using arith::u64;

void WellSpacedSet::validate() const {
  if (!(delta > 0)) throw domain_error("well-spaced set: delta must be positive");
  double lo = 0.5 * delta - T, hi = T - 0.5 * delta;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < lo - 1e-12 || points[i] > hi + 1e-12)
      throw domain_error("well-spaced set: point " + std::to_string(points[i]) +
                         " outside [delta/2 - T, T - delta/2]");
    if (i > 0 && points[i] - points[i - 1] < delta - 1e-12)
      throw domain_error("well-spaced set: points " + std::to_string(points[i - 1]) + " and " +
                         std::to_string(points[i]) + " are closer than delta");
  }
}

namespace {

double initial_panel_width(u64 q, double T) {
  return std::min(0.25, PI / std::log((double)q * (T + 3.0)));
}

std::vector<cplx> value_table(const DirichletCharacter& chi) {
  std::vector<cplx> tab(chi.modulus());
  for (u64 a = 0; a < chi.modulus(); ++a) tab[a] = chi.value((i64)a);
  return tab;
}

// |L(1/2 + it)|^{2k} and the first-order error inherited from the evaluator
std::pair<double, double> abs2k_at(const DirichletCharacter& chi, double t, int k,
                                   const lfunc::Options& eval,
                                   const std::vector<cplx>& chi_table) {
  lfunc::EvalResult L = lfunc::l_value_oracle({0.5, t}, chi, eval, &chi_table);
  double a = std::abs(L.value);
  double a2k = std::pow(a * a, k);
  double err = 2.0 * k * (a > 0 ? a2k / a : 1.0) * L.abs_error_bound;
  return {a2k, err};
}

struct pos_acc {
  kahan_sum val, err;
};

void refine_panel(const std::function<std::pair<double, double>(double)>& f, double a, double b,
                  double budget_density, int depth, pos_acc& acc) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double vw = 0, vl = 0, el = 0, vr = 0, er = 0;
  for (int i = 0; i < 16; ++i) vw += gl16::weight[i] * f(mid + half * gl16::node[i]).first;
  vw *= half;
  double m1 = 0.5 * (a + mid), m2 = 0.5 * (mid + b), quarter = 0.5 * half;
  for (int i = 0; i < 16; ++i) {
    auto [v1, e1] = f(m1 + quarter * gl16::node[i]);
    auto [v2, e2] = f(m2 + quarter * gl16::node[i]);
    vl += gl16::weight[i] * v1;
    el += gl16::weight[i] * e1;
    vr += gl16::weight[i] * v2;
    er += gl16::weight[i] * e2;
  }
  vl *= quarter;
  el *= quarter;
  vr *= quarter;
  er *= quarter;
  double diff = std::abs(vw - (vl + vr));
  if (diff <= budget_density * (b - a) || depth >= 12) {
    acc.val.add(vl);
    acc.val.add(vr);
    acc.err.add(diff + el + er);
    return;
  }
  refine_panel(f, a, mid, budget_density, depth + 1, acc);
  refine_panel(f, mid, b, budget_density, depth + 1, acc);
}

}  // namespace

PositiveIntegral integrate_positive(const std::function<std::pair<double, double>(double)>& f,
                                    double a, double b, double initial_width, double rel_tol) {
  if (!(b > a)) return {0.0, 0.0};
  int n = std::max(1, (int)std::ceil((b - a) / initial_width));
  double w = (b - a) / n;
  // coarse pass sets the scale for the per-panel refinement budget
  double coarse = 0.0;
  for (int i = 0; i < n; ++i) {
    double mid = a + (i + 0.5) * w;
    for (int j = 0; j < 16; ++j)
      coarse += gl16::weight[j] * f(mid + 0.5 * w * gl16::node[j]).first;
  }
  coarse *= 0.5 * w;
  double budget_density = rel_tol * std::max(coarse, 1e-280) / (b - a);
  pos_acc acc;
  for (int i = 0; i < n; ++i) refine_panel(f, a + i * w, a + (i + 1) * w, budget_density, 0, acc);
  return {acc.val.value(), acc.err.value()};
}

MomentReport family_moment_fixed_t(const CharacterFamily& fam, double t, int k,
                                   const Options& opt) {
  if (k < 1) throw domain_error("family_moment_fixed_t: k >= 1");
  MomentReport rep;
  rep.j = fam.order_j;
  rep.Q = fam.Q;
  rep.t = t;
  rep.k = k;
  rep.family_size = (long long)fam.members.size();
  rep.per_character.assign(fam.members.size(), 0.0);
  std::vector<double> errs(fam.members.size(), 0.0);
  parallel_for(fam.members.size(), opt.workers, [&](std::size_t i) {
    auto tab = value_table(fam.members[i]);
    auto [v, e] = abs2k_at(fam.members[i], t, k, opt.eval, tab);
    rep.per_character[i] = v;
    errs[i] = e;
  });
  kahan_sum total, errsum;
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    total.add(rep.per_character[i]);
    errsum.add(errs[i]);
  }
  rep.value = total.value();
  rep.quadrature_error = errsum.value();
  return rep;
}

MomentReport integrated_family_moment(const CharacterFamily& fam, double T, int k, double tol,
                                      const Options& opt) {
  if (k < 1) throw domain_error("integrated_family_moment: k >= 1");
  if (!(T > 0)) throw domain_error("integrated_family_moment: T > 0 required");
  MomentReport rep;
  rep.j = fam.order_j;
  rep.Q = fam.Q;
  rep.T = T;
  rep.k = k;
  rep.family_size = (long long)fam.members.size();
  rep.per_character.assign(fam.members.size(), 0.0);
  std::vector<double> errs(fam.members.size(), 0.0);
  parallel_for(fam.members.size(), opt.workers, [&](std::size_t i) {
    const auto& chi = fam.members[i];
    auto tab = value_table(chi);
    auto f = [&](double t) { return abs2k_at(chi, t, k, opt.eval, tab); };
    PositiveIntegral pi =
        integrate_positive(f, -T, T, initial_panel_width(chi.modulus(), T), tol * 0.5);
    rep.per_character[i] = pi.value;
    errs[i] = pi.err;
  });
  kahan_sum total, errsum;
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    total.add(rep.per_character[i]);
    errsum.add(errs[i]);
  }
  rep.value = total.value();
  rep.quadrature_error = errsum.value();
  if (rep.family_size > 0 && rep.quadrature_error > tol * std::max(rep.value, 1e-280))
    throw accuracy_error("integrated_family_moment: quadrature error " +
                         std::to_string(rep.quadrature_error) +
                         " exceeds tolerance; partial value " + std::to_string(rep.value));
  return rep;
}

MomentReport discrete_family_moment(const CharacterFamily& fam,
                                    const std::vector<WellSpacedSet>& sets, int k,
                                    double integrated_tol, const Options& opt) {
  if (sets.size() != fam.members.size())
    throw domain_error("discrete_family_moment: one well-spaced set per family member required");
  double T = 0, delta = 0;
  for (auto& s : sets) {
    s.validate();
    if (T == 0 && !s.points.empty()) {
      T = s.T;
      delta = s.delta;
    }
  }
  for (auto& s : sets) {
    if (s.points.empty()) continue;
    if (s.T != T || s.delta != delta)
      throw domain_error("discrete_family_moment: sets must share T and delta");
  }
  MomentReport rep;
  rep.j = fam.order_j;
  rep.Q = fam.Q;
  rep.T = T;
  rep.k = k;
  rep.delta = delta;
  rep.family_size = (long long)fam.members.size();
  rep.per_character.assign(fam.members.size(), 0.0);
  std::vector<double> errs(fam.members.size(), 0.0);
  parallel_for(fam.members.size(), opt.workers, [&](std::size_t i) {
    const auto& chi = fam.members[i];
    auto tab = value_table(chi);
    kahan_sum s, e;
    for (double t : sets[i].points) {
      auto [v, err] = abs2k_at(chi, t, k, opt.eval, tab);
      s.add(v);
      e.add(err);
    }
    rep.per_character[i] = s.value();
    errs[i] = e.value();
  });
  kahan_sum total, errsum;
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    total.add(rep.per_character[i]);
    errsum.add(errs[i]);
  }
  rep.value = total.value();
  rep.quadrature_error = errsum.value();
  if (T > 0 && delta > 0) {
    MomentReport integ = integrated_family_moment(fam, T, k, integrated_tol, opt);
    rep.integrated_comparison = (1.0 / delta + 1.0) * integ.value;
  }
  return rep;
}

WellSpacedSet generate_wellspaced(const DirichletCharacter& chi, double T, double delta,
                                  SpacingStrategy strategy, const Options& opt) {
  if (!(T >= delta && delta > 0)) throw domain_error("generate_wellspaced: need T >= delta > 0");
  WellSpacedSet set;
  set.delta = delta;
  set.T = T;
  double lo = 0.5 * delta - T, hi = T - 0.5 * delta;
  if (strategy == SpacingStrategy::grid) {
    for (double t = lo; t <= hi + 1e-12; t += delta) set.points.push_back(t);
  } else {
    auto tab = value_table(chi);
    // fine scan at step delta/10, then greedy peaks in descending |L|
    std::vector<std::pair<double, double>> scan;  // (|L|^2, t)
    for (double t = lo; t <= hi + 1e-12; t += delta / 10.0) {
      auto [v, e] = abs2k_at(chi, t, 1, opt.eval, tab);
      scan.push_back({v, t});
    }
    std::sort(scan.begin(), scan.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<double> chosen;
    for (auto& [v, t] : scan) {
      bool ok = true;
      for (double u : chosen)
        if (std::abs(u - t) < delta) {
          ok = false;
          break;
        }
      if (ok) chosen.push_back(t);
    }
    std::sort(chosen.begin(), chosen.end());
    set.points = std::move(chosen);
  }
  set.validate();
  return set;
}

HardyLittlewoodReport hardy_littlewood_second_moment(double T, double tol, const Options& opt) {
  if (T < 0 || T > 500.0)
    throw domain_error("hardy_littlewood_second_moment: T must lie in [0, 500]");
  HardyLittlewoodReport rep;
  rep.T = T;
  if (T == 0) return rep;
  lfunc::Options eval = opt.eval;
  eval.t_cap = std::max(eval.t_cap, T + 1.0);
  auto f = [&](double t) -> std::pair<double, double> {
    lfunc::EvalResult z = lfunc::hurwitz_zeta({0.5, t}, 1.0, eval);
    double a = std::abs(z.value);
    return {a * a, 2.0 * a * z.abs_error_bound};
  };
  PositiveIntegral pi = integrate_positive(f, 0.0, T, initial_panel_width(1, T), tol);
  rep.value = pi.value;
  rep.quadrature_error = pi.err;
  if (rep.quadrature_error > tol * std::max(rep.value, 1e-280))
    throw accuracy_error("hardy_littlewood_second_moment: quadrature error exceeds tolerance");
  if (T > 1.0) rep.ratio_tlogt = rep.value / (T * std::log(T));
  double refined = T * (std::log(T / TWO_PI) + 2.0 * EULER_GAMMA - 1.0);
  if (refined != 0.0) rep.ratio_refined = rep.value / refined;
  return rep;
}

ScalingFit exponent_fit(std::span<const ScalingSample> samples) {
  if (samples.size() < 4) throw domain_error("exponent_fit: need at least 4 samples");
  std::vector<double> xq, xt, y;
  for (auto& s : samples) {
    if (!(s.Q > 0 && s.T > 0 && s.value > 0))
      throw domain_error("exponent_fit: samples must have positive Q, T, value");
    xq.push_back(std::log(s.Q));
    xt.push_back(std::log(s.T));
    y.push_back(std::log(s.value));
  }
  auto distinct = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v.size();
  };
  if (distinct(xq) < 2 || distinct(xt) < 2)
    throw domain_error("exponent_fit: need >= 2 distinct Q and >= 2 distinct T");

  // normal equations for [c, alpha, beta]
  double n = (double)samples.size();
  double sq = 0, st = 0, sqq = 0, stt = 0, sqt = 0, sy = 0, sqy = 0, sty = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    sq += xq[i];
    st += xt[i];
    sqq += xq[i] * xq[i];
    stt += xt[i] * xt[i];
    sqt += xq[i] * xt[i];
    sy += y[i];
    sqy += xq[i] * y[i];
    sty += xt[i] * y[i];
  }
  double A[3][4] = {{n, sq, st, sy}, {sq, sqq, sqt, sqy}, {st, sqt, stt, sty}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-12 * (n + sqq + stt))
      throw domain_error("exponent_fit: degenerate design matrix");
    for (int c2 = 0; c2 < 4; ++c2) std::swap(A[col][c2], A[piv][c2]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (int c2 = col; c2 < 4; ++c2) A[r][c2] -= f * A[col][c2];
    }
  }
  ScalingFit fit;
  fit.c = A[0][3] / A[0][0];
  fit.alpha = A[1][3] / A[1][1];
  fit.beta = A[2][3] / A[2][2];
  for (std::size_t i = 0; i < samples.size(); ++i)
    fit.max_residual = std::max(fit.max_residual,
                                std::abs(y[i] - fit.c - fit.alpha * xq[i] - fit.beta * xt[i]));
  return fit;
}

Lemma31Report lemma31_comparison(const CharacterFamily& fam, double T, double t, double eps,
                                 const Options& opt) {
  if (std::abs(t) > T) throw domain_error("lemma31_comparison: t must lie in [-T, T]");
  Lemma31Report rep;
  rep.N = std::pow(fam.Q * T, 0.5 + eps);
  kahan_sum lhs;
  for (auto& chi : fam.members) {
    lfunc::EvalResult L = lfunc::l_value_oracle({0.5, t}, chi, opt.eval);
    lhs.add(std::norm(L.value));
  }
  rep.lhs = lhs.value();
  if (rep.N < 1.0) {
    rep.degenerate = true;
    return rep;
  }
  u64 top = (u64)std::floor(2.0 * rep.N);
  std::vector<int> mu = arith::moebius_sieve(top);
  u64 lmax = (u64)std::floor(std::sqrt(2.0 * rep.N));
  kahan_sum rhs;
  for (auto& chi : fam.members) {
    for (u64 l = 1; l <= lmax; ++l) {
      double blockN = rep.N / ((double)l * l);
      u64 nlo = (u64)std::floor(blockN) + 1;
      u64 nhi = (u64)std::floor(2.0 * blockN);
      kahan_csum poly;
      for (u64 n2 = nlo; n2 <= nhi; ++n2) {
        if (mu[n2] == 0) continue;
        cplx cv = chi.value((i64)n2);
        if (cv == cplx(0.0, 0.0)) continue;
        poly.add(cv * pow_neg_s(std::log((double)n2), 0.5, t));
      }
      rhs.add(std::norm(poly.value()) / (double)l);
    }
  }
  rep.rhs = rhs.value();
  return rep;
}

}  // namespace lfam::moments
