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

#include "lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>

#include "errors.hpp"

namespace lfam::lfunc {

namespace {

// B_{2k} / (2k)! for k = 1..11; the k = 11 entry only feeds the remainder bound.
const double bern_over_fact[11] = {
    8.3333333333333333e-02,  -1.3888888888888889e-03, 3.3068783068783069e-05,
    -8.2671957671957672e-07, 2.0876756987868099e-08,  -5.2841901386874932e-10,
    1.3382536530684679e-11,  -3.3896802963225829e-13, 8.5860620562778446e-15,
    -2.1748686985580619e-16, 5.5090028283602295e-18};

constexpr int EM_K = 10;

int em_nodes(double t) { return std::max(2 * (int)std::ceil(std::abs(t)), 30); }

struct em_out {
  cplx value, deriv;
  double err, derr;
  long long terms;
};

// Euler-Maclaurin core for zeta(s, a), optionally carrying d/ds.
em_out hurwitz_core(SPoint sp, double a, double tol, double t_cap, bool want_deriv) {
  if (!(a > 0.0) || a > 1.0) throw domain_error("hurwitz_zeta: a must lie in (0,1]");
  if (sp.sigma == 1.0 && sp.t == 0.0) throw domain_error("hurwitz_zeta: pole at s = 1");
  if (std::abs(sp.t) > t_cap)
    throw domain_error("hurwitz_zeta: |t| exceeds the Euler-Maclaurin cap " +
                       std::to_string(t_cap));
  if (sp.sigma <= -19.0) throw domain_error("hurwitz_zeta: sigma too small for the B_20 scheme");

  const cplx s = sp.s();
  const int N = em_nodes(sp.t);

  kahan_csum sum, dsum;
  double absacc = 0.0;
  for (int n = 0; n < N; ++n) {
    double lv = std::log(n + a);
    cplx term = pow_neg_s(lv, sp.sigma, sp.t);
    sum.add(term);
    absacc += std::abs(term);
    if (want_deriv) dsum.add(-lv * term);
  }

  double w = std::log(N + a);
  cplx npa_pow = pow_neg_s(w, sp.sigma, sp.t);  // (N+a)^{-s}
  cplx sm1 = s - 1.0;
  cplx t1 = npa_pow * (N + a) / sm1;  // (N+a)^{1-s} / (s-1)
  cplx t2 = 0.5 * npa_pow;
  cplx value = sum.value() + t1 + t2;
  cplx deriv = want_deriv ? dsum.value() + (-w * t1 - npa_pow * (N + a) / (sm1 * sm1)) +
                                (-w * t2)
                          : cplx{};
  absacc += std::abs(t1) + std::abs(t2);

  // correction terms: b_k * (s)_{2k-1} * (N+a)^{-s-2k+1}
  cplx P = s, dP = 1.0;       // (s)_m and its s-derivative, m = 1
  cplx pw = npa_pow / (N + a);  // (N+a)^{-s-1}
  double inv2 = 1.0 / ((N + a) * (N + a));
  cplx ck{}, dck{};
  for (int k = 1; k <= EM_K; ++k) {
    ck = bern_over_fact[k - 1] * P * pw;
    value += ck;
    absacc += std::abs(ck);
    if (want_deriv) {
      dck = bern_over_fact[k - 1] * (dP - w * P) * pw;
      deriv += dck;
    }
    // advance (s)_{2k-1} -> (s)_{2k+1} and the power by (N+a)^{-2}
    cplx f1 = s + (double)(2 * k - 1), f2 = s + (double)(2 * k);
    dP = dP * f1 + P;
    P = P * f1;
    dP = dP * f2 + P;
    P = P * f2;
    pw *= inv2;
  }

  // remainder after the B_20 term
  cplx r_term = bern_over_fact[EM_K] * P * pw;
  double scale = std::abs(s + (double)(2 * EM_K + 1)) / (sp.sigma + 2 * EM_K + 1);
  double rem = std::abs(r_term) * scale;
  double err = rem + 4e-16 * absacc;
  if (err > tol)
    throw accuracy_error("hurwitz_zeta: remainder bound " + std::to_string(err) +
                         " exceeds tolerance " + std::to_string(tol));
  double derr = want_deriv ? rem * (w + 3.0) + 4e-16 * absacc * (w + 3.0) : 0.0;
  return {value, deriv, err, derr, (long long)N + EM_K};
}

}  // namespace

EvalResult hurwitz_zeta(SPoint s, double a, const Options& opt) {
  em_out o = hurwitz_core(s, a, opt.tol, opt.t_cap, false);
  return {o.value, o.err, o.terms, Method::hurwitz_oracle};
}

std::pair<EvalResult, EvalResult> hurwitz_zeta_jet(SPoint s, double a, const Options& opt) {
  em_out o = hurwitz_core(s, a, opt.tol, opt.t_cap, true);
  return {EvalResult{o.value, o.err, o.terms, Method::hurwitz_oracle},
          EvalResult{o.deriv, o.derr, o.terms, Method::hurwitz_oracle}};
}

namespace {

// Per-modulus log table so repeated oracle evaluations at many t reuse the
// same ln(n + a/q) values.  Layout is a-major: logv[(a-1)*cap + n].
struct oracle_table {
  u64 q = 0;
  int cap = 0;
  std::vector<double> logv;
  bool has_half_pow = false;  // (n + a/q)^{-1/2}, the hot sigma
  std::vector<double> half_pow;
};

thread_local std::unordered_map<u64, oracle_table> oracle_tables;

const oracle_table& get_oracle_table(u64 q, int need, bool want_half) {
  oracle_table& tb = oracle_tables[q];
  if (tb.q == 0) tb.q = q;
  if (tb.cap < need) {
    int cap = std::max(need, std::max(64, tb.cap * 2));
    tb.logv.assign((std::size_t)(q) * cap, 0.0);
    for (u64 a = 1; a <= q; ++a) {
      double frac = (double)a / (double)q;
      for (int n = 0; n < cap; ++n) tb.logv[(std::size_t)(a - 1) * cap + n] = std::log(n + frac);
    }
    tb.cap = cap;
    tb.has_half_pow = false;
  }
  if (want_half && !tb.has_half_pow) {
    tb.half_pow.assign(tb.logv.size(), 0.0);
    for (u64 a = 1; a <= q; ++a) {
      double frac = (double)a / (double)q;
      for (int n = 0; n < tb.cap; ++n)
        tb.half_pow[(std::size_t)(a - 1) * tb.cap + n] = 1.0 / std::sqrt(n + frac);
    }
    tb.has_half_pow = true;
  }
  return tb;
}

// Euler-Maclaurin tail for zeta(s, x) from node N at x = a/q, without the
// power sum: (N+x)^{1-s}/(s-1) + (N+x)^{-s}/2 + corrections, plus remainder.
struct em_tail_out {
  cplx value;
  double rem;
};

em_tail_out em_tail(const cplx& s, double sigma, double t, int N, double x) {
  double w = std::log(N + x);
  cplx npa_pow = pow_neg_s(w, sigma, t);
  cplx t1 = npa_pow * (N + x) / (s - 1.0);
  cplx value = t1 + 0.5 * npa_pow;
  cplx P = s;
  cplx pw = npa_pow / (N + x);
  double inv2 = 1.0 / ((N + x) * (N + x));
  for (int k = 1; k <= EM_K; ++k) {
    value += bern_over_fact[k - 1] * P * pw;
    P = P * (s + (double)(2 * k - 1)) * (s + (double)(2 * k));
    pw *= inv2;
  }
  double rem = std::abs(bern_over_fact[EM_K] * P * pw) *
               (std::abs(s + (double)(2 * EM_K + 1)) / (sigma + 2 * EM_K + 1));
  return {value, rem};
}

EvalResult l_value_principal(SPoint sp, const DirichletCharacter& chi, const Options& opt) {
  if (sp.sigma == 1.0 && sp.t == 0.0)
    throw domain_error("l_value: principal character has a pole at s = 1");
  em_out z = hurwitz_core(sp, 1.0, opt.tol, opt.t_cap, false);
  cplx v = z.value;
  arith::Factorization f = arith::factorize(chi.modulus());
  for (auto& [p, e] : f.factors) v *= 1.0 - pow_neg_s(std::log((double)p), sp.sigma, sp.t);
  return {v, z.err * 4.0, z.terms, Method::hurwitz_oracle};
}

}  // namespace

EvalResult l_value_oracle(SPoint sp, const DirichletCharacter& chi, const Options& opt,
                          const std::vector<cplx>* chi_table) {
  const u64 q = chi.modulus();
  if (chi.is_principal()) return l_value_principal(sp, chi, opt);
  if (std::abs(sp.t) > opt.t_cap)
    throw domain_error("l_value_oracle: |t| exceeds the Euler-Maclaurin cap");
  if (sp.sigma <= -19.0) throw domain_error("l_value_oracle: sigma too small");

  const cplx s = sp.s();
  const int N = em_nodes(sp.t);
  const bool half = sp.sigma == 0.5;
  const oracle_table& tb = get_oracle_table(q, N, half);

  kahan_csum acc;
  double abs_terms = 0.0, tail_rem = 0.0;
  for (u64 a = 1; a < q; ++a) {
    cplx ca = chi_table ? (*chi_table)[a] : chi.value((i64)a);
    if (ca == cplx(0.0, 0.0)) continue;
    const double* lv = &tb.logv[(std::size_t)(a - 1) * tb.cap];
    kahan_csum inner;
    double inner_abs = 0.0;
    if (half) {
      const double* hp = &tb.half_pow[(std::size_t)(a - 1) * tb.cap];
      for (int n = 0; n < N; ++n) {
        inner.add(hp[n] * unit_phase(-sp.t * lv[n]));
        inner_abs += hp[n];
      }
    } else {
      for (int n = 0; n < N; ++n) {
        double r = std::exp(-sp.sigma * lv[n]);
        inner.add(r * unit_phase(-sp.t * lv[n]));
        inner_abs += r;
      }
    }
    em_tail_out tail = em_tail(s, sp.sigma, sp.t, N, (double)a / (double)q);
    cplx za = inner.value() + tail.value;
    acc.add(ca * za);
    abs_terms += inner_abs + std::abs(tail.value);
    tail_rem += tail.rem;
  }
  cplx qs = pow_neg_s(std::log((double)q), sp.sigma, sp.t);
  cplx value = qs * acc.value();
  double qfac = std::pow((double)q, -sp.sigma);
  // term-evaluation rounding (a few ulp each) dominates the compensated sums
  double err = qfac * (tail_rem + 6e-16 * abs_terms);
  if (err > opt.tol * (double)q) {  // the contract scales the per-term tolerance by q
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", err);
    throw accuracy_error(std::string("l_value_oracle: error bound ") + buf +
                         " exceeds q * tol");
  }
  return {value, err, (long long)q * (N + EM_K), Method::hurwitz_oracle};
}

EvalResult l_value(SPoint s, const DirichletCharacter& chi, Method m, const Options& opt,
                   const std::vector<cplx>* chi_table) {
  if (m == Method::hurwitz_oracle) return l_value_oracle(s, chi, opt, chi_table);
  return l_value_afe(s, chi, std::max(opt.tol, 1e-10), opt);
}

// ---------------------------------------------------------------------------
// Smoothed approximate functional equation.
//
// With a = (s+kappa)/2, b = (1-s+kappa)/2, X_n = sqrt(q/pi)/n and the even
// kernel g(w) = e^{beta w^2},
//
//   L(s,chi) = sum_n chi(n) n^{-s} V1(n)
//            + eps(chi) (q/pi)^{1/2-s} [Gamma(b)/Gamma(a)] sum_n conj(chi)(n) n^{s-1} V2(n),
//
//   V1(n) = (1/2 pi i) Int_{(2)} [Gamma(a+w/2)/Gamma(a)] X_n^w g(w) dw/w,
//
// and V2 likewise with b.  beta is chosen so the Gamma-ratio spike near
// Im w = -t (where the argument of the numerator crosses the real axis)
// stays below e^5, keeping every intermediate polynomially bounded; g(0)=1
// keeps the weights normalized.  Nodes are shared by all n.
// ---------------------------------------------------------------------------

namespace {

struct afe_nodes {
  std::vector<double> v;        // node ordinates
  std::vector<cplx> g1, g2;     // weight-function values times quadrature weights
  double max_node = 0.0;
};

}  // namespace

EvalResult l_value_afe(SPoint sp, const DirichletCharacter& chi, double tol,
                       const Options& opt) {
  if (!chi.is_primitive()) throw domain_error("l_value_afe: primitive character required");
  if (!(sp.sigma > 0.0 && sp.sigma < 1.0))
    throw domain_error("l_value_afe: s must lie in the critical strip");
  const u64 q = chi.modulus();
  if ((double)q * (std::abs(sp.t) + 1.0) > opt.afe_cap)
    throw domain_error("l_value_afe: q(|t|+1) exceeds afe_cap");
  tol = std::max(tol, 1e-12);

  if (sp.t < 0.0) {
    EvalResult r = l_value_afe({sp.sigma, -sp.t}, chi.conjugate(), tol, opt);
    r.value = std::conj(r.value);
    return r;
  }

  const double t = sp.t;
  const cplx s = sp.s();
  const int kappa = chi.parity();
  const cplx a = 0.5 * (s + (double)kappa);
  const cplx b = 0.5 * (1.0 - s + (double)kappa);
  const cplx lga = log_gamma(a), lgb = log_gamma(b);
  const double abs_a = std::abs(a);

  const double beta = t >= 3.0 ? std::max(0.0, (PI * t / 4.0 - 5.0) / (t * t - 4.0)) : 0.0;
  const double lnX = 0.5 * std::log((double)q / PI);

  // node grid: fixed-width Gauss-Legendre panels, symmetric growth from 0,
  // extended until the weight functions are dead on both sides
  const double omega =
      std::abs(lnX) + std::log(2.5 + std::abs(std::log((double)q))) + 0.5 * std::log(abs_a + 3.0) +
      2.0 * beta * (t + 60.0) + 1.0;
  const double h = std::min(0.9, 6.0 / omega);
  const double cut = tol * 1e-3;

  afe_nodes nd;
  auto add_panel = [&](double lo, double hi) -> double {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double maxmag = 0.0;
    for (int i = 0; i < 16; ++i) {
      double v = mid + half * gl16::node[i];
      cplx w(2.0, v);
      cplx kernel = std::exp(beta * (4.0 - v * v)) * unit_phase(4.0 * beta * v) / w *
                    (half * gl16::weight[i] / TWO_PI);
      cplx r1 = std::exp(log_gamma(a + cplx(1.0, 0.5 * v)) - lga);
      cplx r2 = std::exp(log_gamma(b + cplx(1.0, 0.5 * v)) - lgb);
      nd.v.push_back(v);
      nd.g1.push_back(r1 * kernel);
      nd.g2.push_back(r2 * kernel);
      maxmag = std::max({maxmag, std::abs(nd.g1.back()), std::abs(nd.g2.back())});
      nd.max_node = std::max(nd.max_node, maxmag);
    }
    return maxmag;
  };

  const double vmax_hard = t + 400.0;
  double up = 0.0, down = 0.0;
  int quiet_up = 0, quiet_down = 0;
  while (quiet_up < 2 && up < vmax_hard) {
    double m = add_panel(up, up + h);
    quiet_up = m < cut ? quiet_up + 1 : 0;
    up += h;
  }
  while (quiet_down < 2 && down > -vmax_hard) {
    double m = add_panel(down - h, down);
    quiet_down = m < cut ? quiet_down + 1 : 0;
    down -= h;
  }
  if (up >= vmax_hard || down <= -vmax_hard)
    throw accuracy_error("l_value_afe: kernel failed to decay inside the node budget");
  const std::size_t nn = nd.v.size();

  // term sums
  const double n_transition = std::sqrt(q * (abs_a + 2.0) / PI);
  kahan_csum s1, s2;
  long long terms = 0;
  int quiet = 0;
  double tail_est = 0.0;
  u64 n = 1;
  for (; n < 4'000'000; ++n) {
    double lnXn = lnX - std::log((double)n);
    cplx v1{}, v2{};
    for (std::size_t i = 0; i < nn; ++i) {
      cplx ph = unit_phase(nd.v[i] * lnXn);
      v1 += nd.g1[i] * ph;
      v2 += nd.g2[i] * ph;
    }
    double xn2 = std::exp(2.0 * lnXn);
    v1 *= xn2;
    v2 *= xn2;
    double m1 = std::abs(v1) * std::pow((double)n, -sp.sigma);
    double m2 = std::abs(v2) * std::pow((double)n, sp.sigma - 1.0);
    cplx cn = chi.value((i64)n);
    if (cn != cplx(0.0, 0.0)) {
      s1.add(cn * pow_neg_s(std::log((double)n), sp.sigma, t) * v1);
      s2.add(std::conj(cn) * pow_neg_s(std::log((double)n), 1.0 - sp.sigma, -t) * v2);
      terms += 2;
    }
    if (m1 + m2 < tol / 16.0 && (double)n > 1.2 * n_transition) {
      tail_est = std::max(tail_est, m1 + m2);
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  if (n >= 4'000'000) throw accuracy_error("l_value_afe: main sum failed to truncate");

  cplx prefactor = chars::root_number(chi) *
                   std::exp((0.5 - s) * std::log((double)q / PI) + lgb - lga);
  cplx value = s1.value() + prefactor * s2.value();
  double err = tol / 4.0 + 12.0 * tail_est +
               nd.max_node * std::exp(2.0 * std::abs(lnX)) * (double)nn * 4e-16;
  return {value, err, terms, Method::smoothed_afe};
}

EvalResult l_derivative(SPoint sp, const DirichletCharacter& chi, const Options& opt,
                        bool crosscheck) {
  const u64 q = chi.modulus();
  cplx value{}, deriv{};
  double err = 0.0;
  long long terms = 0;
  if (chi.is_principal()) {
    // L = zeta(s) P(s), P = prod_{p|q} (1 - p^{-s})
    auto [z, dz] = hurwitz_zeta_jet(sp, 1.0, opt);
    cplx P = 1.0, dP_over = 0.0;
    arith::Factorization f = arith::factorize(q);
    for (auto& [p, e] : f.factors) {
      double lp = std::log((double)p);
      cplx pe = pow_neg_s(lp, sp.sigma, sp.t);
      P *= 1.0 - pe;
      dP_over += lp * pe / (1.0 - pe);
    }
    value = z.value * P;
    deriv = dz.value * P + z.value * P * dP_over;
    err = dz.abs_error_bound * 4.0;
    terms = z.terms_used;
  } else {
    double lq = std::log((double)q);
    kahan_csum acc, dacc;
    for (u64 a = 1; a < q; ++a) {
      cplx ca = chi.value((i64)a);
      if (ca == cplx(0.0, 0.0)) continue;
      auto [z, dz] = hurwitz_zeta_jet(sp, (double)a / (double)q, opt);
      acc.add(ca * z.value);
      dacc.add(ca * dz.value);
      err += dz.abs_error_bound;
      terms += z.terms_used;
    }
    cplx qs = pow_neg_s(lq, sp.sigma, sp.t);
    value = qs * acc.value();
    deriv = qs * (dacc.value() - lq * acc.value());
    err *= std::pow((double)q, -sp.sigma);
    err += 1e-14 * (1.0 + std::abs(deriv));
  }
  if (crosscheck) {
    const double hstep = 1e-4;
    EvalResult lo = chi.is_principal()
                        ? l_value_principal({sp.sigma - hstep, sp.t}, chi, opt)
                        : l_value_oracle({sp.sigma - hstep, sp.t}, chi, opt);
    EvalResult hi = chi.is_principal()
                        ? l_value_principal({sp.sigma + hstep, sp.t}, chi, opt)
                        : l_value_oracle({sp.sigma + hstep, sp.t}, chi, opt);
    cplx fd = (hi.value - lo.value) / (2.0 * hstep);
    if (std::abs(fd - deriv) > 1e-6 * std::max(1.0, std::abs(deriv)))
      throw accuracy_error("l_derivative: series and finite-difference paths disagree by " +
                           std::to_string(std::abs(fd - deriv)));
  }
  return {deriv, err, terms, Method::hurwitz_oracle};
}

cplx completed_l(SPoint sp, const DirichletCharacter& chi, const Options& opt) {
  const cplx s = sp.s();
  const double kappa = chi.parity();
  EvalResult L = l_value_oracle(sp, chi, opt);
  cplx lg = log_gamma(0.5 * (s + kappa));
  cplx factor = std::exp(0.5 * (s + kappa) * std::log((double)chi.modulus() / PI) + lg);
  return factor * L.value;
}

cplx dirichlet_polynomial(std::span<const std::pair<u64, cplx>> coeffs, SPoint s,
                          const DirichletCharacter* chi) {
  kahan_csum acc;
  for (auto& [n, an] : coeffs) {
    if (n == 0) throw domain_error("dirichlet_polynomial: indices start at 1");
    cplx c = an;
    if (chi) {
      cplx cv = chi->value((i64)n);
      if (cv == cplx(0.0, 0.0)) continue;
      c *= cv;
    }
    acc.add(c * pow_neg_s(std::log((double)n), s.sigma, s.t));
  }
  return acc.value();
}

MollifierCoefficients mollifier_coefficients(double X, u64 nmax) {
  if (X < 2.0 || (double)nmax < X)
    throw domain_error("mollifier_coefficients: need 2 <= X <= nmax");
  if (nmax > 20'000'000) throw domain_error("mollifier_coefficients: nmax exceeds table cap");
  MollifierCoefficients mc;
  mc.X = X;
  mc.nmax = nmax;
  mc.m.assign(nmax + 1, 0);
  u64 dmax = (u64)std::floor(X);
  std::vector<int> mu = arith::moebius_sieve(dmax);
  for (u64 d = 1; d <= dmax; ++d) {
    if (mu[d] == 0) continue;
    for (u64 v = d; v <= nmax; v += d) mc.m[v] += mu[d];
  }
  if (mc.m[1] != 1) throw internal_error("mollifier_coefficients: m[1] != 1");
  for (u64 v = 2; (double)v <= X && v <= nmax; ++v)
    if (mc.m[v] != 0) throw internal_error("mollifier_coefficients: cancellation failed");
  return mc;
}

cplx smoothed_power_sum(const DirichletCharacter& chi, SPoint s, int k, double U) {
  if (k < 1) throw domain_error("smoothed_power_sum: k >= 1");
  if (!(U >= 2.0) || U > 1e5) throw domain_error("smoothed_power_sum: U must lie in [2, 1e5]");
  u64 cap = (u64)std::ceil(U * (33.0 + 6.0 * k * std::log(40.0 * U)));
  std::vector<i64> tk = arith::tau_k_sieve(cap, k);
  kahan_csum acc;
  for (u64 n = 1; n <= cap; ++n) {
    double damp = std::exp(-(double)n / U);
    if ((double)tk[n] * damp < 1e-14 && (double)n > U) break;
    cplx cn = chi.value((i64)n);
    if (cn == cplx(0.0, 0.0)) continue;
    acc.add((double)tk[n] * damp * cn * pow_neg_s(std::log((double)n), s.sigma, s.t));
  }
  return acc.value();
}

double mellin_identity_residual(const DirichletCharacter& chi, SPoint sp, int k, double U,
                                double c_offset, double tol, const Options& opt) {
  if (chi.is_principal() || !chi.is_primitive())
    throw domain_error("mellin_identity_residual: non-principal primitive character required");
  if (!(c_offset > -1.0 && c_offset < 0.0))
    throw domain_error("mellin_identity_residual: c_offset must lie in (-1,0)");
  if (k < 1) throw domain_error("mellin_identity_residual: k >= 1");

  EvalResult L = l_value_oracle(sp, chi, opt);
  cplx lk = std::pow(L.value, (double)k);
  cplx sps = smoothed_power_sum(chi, sp, k, U);

  // (1/2 pi i) Int L(w)^k Gamma(w-s) U^{w-s} dw on Re w = sigma + c_offset,
  // truncated where |Gamma(c_offset + i(v-t))| is dead.
  const double c = sp.sigma + c_offset;
  const double lnU = std::log(U);
  double halfwidth = 4.0;
  while (std::abs(gamma_fn(cplx(c_offset, halfwidth))) * std::exp(c_offset * lnU) > 1e-17 &&
         halfwidth < 220.0)
    halfwidth += 2.0;
  auto integrand = [&](double v) -> cplx {
    EvalResult lw = l_value_oracle({c, v}, chi, opt);
    cplx wms = cplx(c_offset, v - sp.t);
    return std::pow(lw.value, (double)k) * gamma_fn(wms) * std::exp(wms * lnU);
  };
  quad_result qr = integrate_adaptive(integrand, sp.t - halfwidth, sp.t + halfwidth,
                                      std::min(0.5, 2.5 / (lnU + 1.0)), tol * 1e-2);
  if (qr.err > tol)
    throw accuracy_error("mellin_identity_residual: contour quadrature did not converge");
  cplx integral = qr.value / TWO_PI;  // dw = i dv and 1/(2 pi i) combine to 1/(2 pi)

  return std::abs(lk - sps + integral);
}

}  // namespace lfam::lfunc
