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

#include "sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "lfunc.hpp"
#include "parallel.hpp"

namespace lfam::sieve {

double CoefficientVector::norm2() const {
  kahan_sum s;
  for (auto& [n, a] : entries) s.add(std::norm(a));
  return s.value();
}

void CoefficientVector::validate() const {
  u64 last = 0;
  for (auto& [n, a] : entries) {
    if (n <= last) throw domain_error("coefficient vector: indices must be increasing");
    if ((double)n <= N || (double)n > 2.0 * N)
      throw domain_error("coefficient vector: index " + std::to_string(n) +
                         " outside (N, 2N]");
    if (arith::moebius(n) == 0)
      throw domain_error("coefficient vector: index " + std::to_string(n) + " not squarefree");
    last = n;
  }
  if (!(norm2() > 0)) throw domain_error("coefficient vector: norm must be positive");
}

CoefficientVector random_unit_vector(double N, u64 seed) {
  if (!(N >= 1)) throw domain_error("random_unit_vector: N >= 1 required");
  CoefficientVector cv;
  cv.N = N;
  cv.seed = seed;
  splitmix64 rng(seed ^ 0x5eed5eed5eed5eedULL);
  u64 lo = (u64)std::floor(N) + 1, hi = (u64)std::floor(2.0 * N);
  std::vector<int> mu = arith::moebius_sieve(hi);
  for (u64 n = lo; n <= hi; ++n) {
    if (mu[n] == 0) continue;
    cv.entries.push_back({n, unit_phase(TWO_PI * rng.next_unit())});
  }
  if (cv.entries.empty())
    throw domain_error("random_unit_vector: no squarefree integers in (N, 2N]");
  return cv;
}

double delta_bound(int j, double Q, double T, double N) {
  if (!(Q >= 1 && T >= 1 && N >= 1)) throw domain_error("delta_bound: Q, T, N >= 1 required");
  auto p = [](double x, double num, double den) { return std::pow(x, num / den); };
  switch (j) {
    case 2:
      return Q * T + N;
    case 3:
    case 6:
      return std::min(
          std::min(p(Q, 5, 3) * T + N, p(Q, 4, 3) * T + std::sqrt(Q) * N),
          std::min(p(Q, 11, 9) * T + p(Q, 2, 3) * N,
                   Q * T + p(Q, 1, 3) * p(N, 5, 3) * p(T, -2, 3) + p(N, 12, 5) * p(T, -7, 5)));
    case 4:
      return std::min(
          std::min(p(Q, 3, 2) * T + N, p(Q, 5, 4) * T + std::sqrt(Q) * N),
          std::min(p(Q, 7, 6) * T + p(Q, 2, 3) * N,
                   Q * T + p(Q, 1, 3) * p(N, 5, 3) * p(T, -2, 3) + p(N, 7, 3) * p(T, -4, 3)));
    default:
      throw domain_error("delta_bound: j must be one of 2, 3, 4, 6");
  }
}

namespace {

cplx character_poly(const DirichletCharacter& chi, const std::vector<std::pair<u64, cplx>>& ent) {
  kahan_csum s;
  for (auto& [n, a] : ent) {
    cplx cv = chi.value((arith::i64)n);
    if (cv == cplx(0.0, 0.0)) continue;
    s.add(a * cv);
  }
  return s.value();
}

}  // namespace

SieveReport sieve_lhs_discrete(const CharacterFamily& fam, const CoefficientVector& coeffs,
                               unsigned workers) {
  coeffs.validate();
  SieveReport rep;
  rep.j = fam.order_j;
  rep.Q = fam.Q;
  rep.T = 1.0;
  rep.N = coeffs.N;
  rep.norm = coeffs.norm2();
  rep.mode = SieveMode::discrete;
  rep.family_size = (long long)fam.members.size();
  rep.seed = coeffs.seed;
  std::vector<double> per(fam.members.size(), 0.0);
  parallel_for(fam.members.size(), workers, [&](std::size_t i) {
    per[i] = std::norm(character_poly(fam.members[i], coeffs.entries));
  });
  kahan_sum lhs;
  for (double v : per) lhs.add(v);
  rep.lhs = lhs.value();
  rep.bound = delta_bound(fam.order_j, fam.Q, 1.0, coeffs.N);
  rep.ratio = rep.lhs / (rep.norm * rep.bound);
  return rep;
}

double integrated_kernel(u64 n, u64 m, double T) {
  if (n == m) return 2.0 * T;
  double lr = std::log((double)n / (double)m);
  return 2.0 * std::sin(T * lr) / lr;
}

SieveReport sieve_lhs_integrated(const CharacterFamily& fam, double T,
                                 const CoefficientVector& coeffs, unsigned workers) {
  coeffs.validate();
  if (!(T > 0)) throw domain_error("sieve_lhs_integrated: T > 0 required");
  SieveReport rep;
  rep.j = fam.order_j;
  rep.Q = fam.Q;
  rep.T = T;
  rep.N = coeffs.N;
  rep.norm = coeffs.norm2();
  rep.mode = SieveMode::integrated;
  rep.family_size = (long long)fam.members.size();
  rep.seed = coeffs.seed;
  const auto& ent = coeffs.entries;
  std::vector<double> per(fam.members.size(), 0.0);
  parallel_for(fam.members.size(), workers, [&](std::size_t i) {
    const auto& chi = fam.members[i];
    std::vector<cplx> b(ent.size());
    for (std::size_t r = 0; r < ent.size(); ++r) b[r] = ent[r].second * chi.value((arith::i64)ent[r].first);
    kahan_csum acc;
    for (std::size_t r = 0; r < ent.size(); ++r)
      for (std::size_t c = 0; c < ent.size(); ++c)
        acc.add(b[r] * std::conj(b[c]) * integrated_kernel(ent[r].first, ent[c].first, T));
    per[i] = acc.value().real();
  });
  kahan_sum lhs;
  for (double v : per) lhs.add(v);
  rep.lhs = lhs.value();
  // the Delta formulas are stated for T >= 1; clamp the report column
  rep.bound = delta_bound(fam.order_j, fam.Q, std::max(T, 1.0), coeffs.N);
  rep.ratio = rep.lhs / (rep.norm * rep.bound);
  return rep;
}

namespace {

double gallagher_lhs(const WellSpacedSet& set, const std::vector<double>& f2_at_points,
                     double delta) {
  kahan_sum lhs;
  const auto& pts = set.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    long long nd = 0;
    for (double u : pts)
      if (std::abs(u - pts[i]) < delta) ++nd;
    lhs.add(f2_at_points[i] / (double)nd);
  }
  return lhs.value();
}

GallagherReport finish_gallagher(double lhs, double int_f2, double int_df2, double delta) {
  GallagherReport rep;
  rep.lhs = lhs;
  rep.int_f2 = int_f2;
  rep.int_df2 = int_df2;
  rep.rhs = int_f2 / delta + std::sqrt(int_f2) * std::sqrt(int_df2);
  rep.holds = lhs <= rep.rhs + 1e-6 * rep.rhs;
  return rep;
}

void check_set_interval(const WellSpacedSet& set, double T, double delta) {
  if (set.delta != delta || set.T != T)
    throw domain_error("gallagher_check: set was built for different (T, delta)");
  set.validate();
}

}  // namespace

GallagherReport gallagher_check_l(const DirichletCharacter& chi, double T, double delta,
                                  const WellSpacedSet& set, const moments::Options& opt) {
  check_set_interval(set, T, delta);
  std::vector<cplx> tab(chi.modulus());
  for (u64 a = 0; a < chi.modulus(); ++a) tab[a] = chi.value((i64)a);
  std::vector<double> f2;
  for (double t : set.points) {
    lfunc::EvalResult L = lfunc::l_value_oracle({0.5, t}, chi, opt.eval, &tab);
    f2.push_back(std::norm(L.value));
  }
  double w = std::min(0.25, PI / std::log((double)chi.modulus() * (T + 3.0)));
  auto fL = [&](double t) -> std::pair<double, double> {
    lfunc::EvalResult L = lfunc::l_value_oracle({0.5, t}, chi, opt.eval, &tab);
    return {std::norm(L.value), 0.0};
  };
  // |f'(t)| = |L'(1/2+it)|: d/dt = i d/ds on the vertical line
  auto fdL = [&](double t) -> std::pair<double, double> {
    lfunc::EvalResult d = lfunc::l_derivative({0.5, t}, chi, opt.eval, false);
    return {std::norm(d.value), 0.0};
  };
  double int_f2 = moments::integrate_positive(fL, -T, T, w, 1e-7).value;
  double int_df2 = moments::integrate_positive(fdL, -T, T, w, 1e-7).value;
  return finish_gallagher(gallagher_lhs(set, f2, delta), int_f2, int_df2, delta);
}

GallagherReport gallagher_check_poly(const std::vector<std::pair<u64, cplx>>& coeffs,
                                     const DirichletCharacter* chi, double T, double delta,
                                     const WellSpacedSet& set) {
  check_set_interval(set, T, delta);
  std::vector<std::pair<u64, cplx>> c;
  for (auto& [n, a] : coeffs) {
    if (n == 0) throw domain_error("gallagher_check: polynomial indices start at 1");
    cplx v = a;
    if (chi) {
      cplx cv = chi->value((i64)n);
      if (cv == cplx(0.0, 0.0)) continue;
      v *= cv;
    }
    c.push_back({n, v});
  }
  std::vector<double> f2;
  for (double t : set.points) {
    kahan_csum s;
    for (auto& [n, v] : c) s.add(v * unit_phase(-t * std::log((double)n)));
    f2.push_back(std::norm(s.value()));
  }
  kahan_sum if2, idf2;
  for (auto& [n, vn] : c)
    for (auto& [m, vm] : c) {
      double ker = integrated_kernel(n, m, T);
      cplx cross = vn * std::conj(vm);
      if2.add((cross * ker).real());
      idf2.add((cross * ker).real() * std::log((double)n) * std::log((double)m));
    }
  return finish_gallagher(gallagher_lhs(set, f2, delta), if2.value(), idf2.value(), delta);
}

MeanValueReport meanvalue_check(const CharacterFamily& fam, double T, double delta, double sigma0,
                                const std::vector<std::vector<std::pair<double, double>>>& points,
                                const std::vector<std::pair<u64, cplx>>& coeffs, double N,
                                unsigned workers) {
  if (points.size() != fam.members.size())
    throw domain_error("meanvalue_check: one point list per family member required");
  if (!(sigma0 > 0 && sigma0 < 1)) throw domain_error("meanvalue_check: sigma0 in (0,1)");
  for (auto& [n, a] : coeffs) {
    if ((double)n > N) throw domain_error("meanvalue_check: coefficient index above N");
    if (arith::moebius(n) == 0)
      throw domain_error("meanvalue_check: coefficient index not squarefree");
  }
  MeanValueReport rep;
  for (auto& lst : points) {
    WellSpacedSet ws;
    ws.delta = delta;
    ws.T = T;
    for (auto& [sig, t] : lst) {
      if (sig < sigma0 || sig >= 1.0)
        throw domain_error("meanvalue_check: sigma_t outside [sigma0, 1)");
      ws.points.push_back(t);
    }
    std::sort(ws.points.begin(), ws.points.end());
    ws.validate();
    rep.point_count += (long long)lst.size();
  }
  std::vector<double> per(fam.members.size(), 0.0);
  parallel_for(fam.members.size(), workers, [&](std::size_t i) {
    kahan_sum s;
    for (auto& [sig, t] : points[i]) {
      cplx v = lfunc::dirichlet_polynomial(coeffs, {sig, t}, &fam.members[i]);
      s.add(std::norm(v));
    }
    per[i] = s.value();
  });
  kahan_sum lhs;
  for (double v : per) lhs.add(v);
  rep.lhs = lhs.value();

  kahan_sum dn;
  for (auto& [n, a] : coeffs) dn.add(std::norm(a) * std::pow((double)n, -2.0 * sigma0));
  rep.damped_norm = dn.value();

  double factor = 1.0 / delta + 1.0;
  rep.rhs_delta = factor * delta_bound(fam.order_j, fam.Q, T, N) * rep.damped_norm;
  rep.rhs_montgomery =
      factor * (N + fam.Q * std::sqrt(T) * (double)rep.point_count) * rep.damped_norm;
  rep.ratio_delta = rep.rhs_delta > 0 ? rep.lhs / rep.rhs_delta : 0.0;
  rep.ratio_montgomery = rep.rhs_montgomery > 0 ? rep.lhs / rep.rhs_montgomery : 0.0;
  return rep;
}

}  // namespace lfam::sieve
