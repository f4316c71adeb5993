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

#include "zeros.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace lfam::zeros {

using arith::i64;
using arith::u64;

namespace {

double zero_gap_estimate(u64 q, double T) {
  return PI / std::max(1.0, std::log((double)q * (T + 3.0) / TWO_PI));
}

struct contour_walker {
  const DirichletCharacter& chi;
  const lfunc::Options& eval;
  std::vector<cplx> tab;
  double total_arg = 0.0;
  cplx prev{};
  bool started = false;

  explicit contour_walker(const DirichletCharacter& c, const lfunc::Options& e)
      : chi(c), eval(e), tab(c.modulus()) {
    for (u64 a = 0; a < c.modulus(); ++a) tab[a] = c.value((i64)a);
  }

  cplx eval_at(cplx z) {
    lfunc::EvalResult r = lfunc::l_value_oracle({z.real(), z.imag()}, chi, eval, &tab);
    if (r.value == cplx(0.0, 0.0))
      throw accuracy_error("count_zeros_rectangle: contour passes through a zero");
    return r.value;
  }

  void start(cplx z) {
    prev = eval_at(z);
    started = true;
  }

  // advance from z_from toward z_to, accumulating arg increments < pi/2
  void walk(cplx z_from, cplx z_to, double h0) {
    double len = std::abs(z_to - z_from);
    if (len == 0) return;
    cplx dir = (z_to - z_from) / len;
    const double hmin = len * 1e-7 + 1e-9;
    double pos = 0.0, h = h0;
    while (pos < len) {
      double step = std::min(h, len - pos);
      cplx z = z_from + (pos + step) * dir;
      cplx v = eval_at(z);
      double dphi = std::arg(v / prev);
      if (std::abs(dphi) >= 0.45 * PI) {
        h = 0.5 * step;
        if (h < hmin)
          throw accuracy_error(
              "count_zeros_rectangle: phase step too large near the contour; a zero sits "
              "within the minimum step");
        continue;
      }
      total_arg += dphi;
      prev = v;
      pos += step;
      h = std::min(h0, 2.0 * h);
    }
  }
};

}  // namespace

ZeroCountReport count_zeros_rectangle(const DirichletCharacter& chi, double sigma, double T,
                                      const Options& opt) {
  if (!chi.is_primitive() || chi.is_principal())
    throw domain_error("count_zeros_rectangle: primitive non-principal character required");
  if (!(sigma > 0.5 && sigma < 1.0))
    throw domain_error("count_zeros_rectangle: sigma must lie in (1/2, 1)");
  if (!(T > 0)) throw domain_error("count_zeros_rectangle: T > 0 required");

  const double right = 1.5;
  const u64 q = chi.modulus();
  const double h_horiz = opt.grid_scale * std::min(0.1, 1.0 / std::log((double)q * (T + 3.0)));
  const double h_vert = opt.grid_scale * zero_gap_estimate(q, T) / 8.0;

  contour_walker w(chi, opt.eval);
  cplx c1(sigma, -T), c2(right, -T), c3(right, T), c4(sigma, T);
  w.start(c1);
  w.walk(c1, c2, h_horiz);
  w.walk(c2, c3, h_vert);
  w.walk(c3, c4, h_horiz);
  w.walk(c4, c1, h_vert);

  double winding = w.total_arg / TWO_PI;
  ZeroCountReport rep;
  rep.sigma = sigma;
  rep.T = T;
  rep.right_edge = right;
  rep.count = (long long)std::llround(winding);
  rep.winding_residual = std::abs(winding - (double)rep.count);
  if (rep.winding_residual >= 0.25)
    throw accuracy_error("count_zeros_rectangle: winding residual " +
                         std::to_string(rep.winding_residual) + " rejected");
  if (rep.count < 0)
    throw internal_error("count_zeros_rectangle: negative winding number");
  return rep;
}

namespace {

struct hardy_z {
  const DirichletCharacter& chi;
  const lfunc::Options& eval;
  std::vector<cplx> tab;
  cplx rotation;  // eps(chi)^{-1/2}, fixed branch

  hardy_z(const DirichletCharacter& c, const lfunc::Options& e) : chi(c), eval(e), tab(c.modulus()) {
    for (u64 a = 0; a < c.modulus(); ++a) tab[a] = c.value((i64)a);
    cplx eps = chars::root_number(c);
    rotation = unit_phase(-0.5 * std::arg(eps));
  }

  double operator()(double t) const {
    cplx s(0.5, t);
    double kappa = chi.parity();
    cplx factor = std::exp(0.5 * (s + kappa) * std::log((double)chi.modulus() / PI) +
                           log_gamma(0.5 * (s + kappa)));
    lfunc::EvalResult L = lfunc::l_value_oracle({0.5, t}, chi, eval, &tab);
    cplx rot = rotation * factor * L.value;
    // realness is relative to the natural scale of Lambda on this line, not
    // to the pointwise value, which vanishes at the zeros being hunted
    double scale = std::abs(factor) * (std::abs(L.value) + 1.0);
    if (std::abs(rot.imag()) > 1e-8 * scale)
      throw internal_error("critical_line_zeros: rotated completed value is not real");
    return rot.real();
  }
};

}  // namespace

std::vector<CriticalZero> critical_line_zeros(const DirichletCharacter& chi, double T,
                                              const Options& opt, double grid_offset) {
  if (!chi.is_primitive() || chi.is_principal())
    throw domain_error("critical_line_zeros: primitive non-principal character required");
  if (!(T > 0)) throw domain_error("critical_line_zeros: T > 0 required");

  hardy_z Z(chi, opt.eval);
  const double step = opt.grid_scale * zero_gap_estimate(chi.modulus(), T) / 8.0;
  const double start = -T + grid_offset * step;

  std::vector<CriticalZero> zeros;
  double t_prev = start;
  double z_prev = Z(t_prev);
  for (double t = start + step; t_prev < T; t += step) {
    double tc = std::min(t, T);
    double zc = Z(tc);
    if ((z_prev < 0 && zc > 0) || (z_prev > 0 && zc < 0)) {
      double lo = t_prev, hi = tc, zlo = z_prev;
      while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        double zm = Z(mid);
        if (zm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((zlo < 0) == (zm < 0)) {
          lo = mid;
          zlo = zm;
        } else {
          hi = mid;
        }
      }
      CriticalZero zr{0.5 * (lo + hi), hi - lo};
      lfunc::EvalResult L = lfunc::l_value_oracle({0.5, zr.gamma}, chi, opt.eval);
      if (std::abs(L.value) > 1e-6)
        throw internal_error("critical_line_zeros: refined point has |L| > 1e-6");
      zeros.push_back(zr);
    }
    if (tc >= T) break;
    t_prev = tc;
    z_prev = zc;
  }
  return zeros;
}

namespace {

// (1/2pi) Int over [-A, A] of MX(1/2 + i(gamma+u)) Gamma(iu) Y^{iu} du with
// panels mirrored about u = 0 so the odd part of the near-pole integrand
// cancels pairwise.  MX(rho) ~ 0 at a zero, which removes the Gamma pole.
cplx detector_line_integral(const std::function<cplx(double)>& mx_at, double gammaord, double A,
                            double Y, double width0) {
  kahan_csum acc;
  double lnY = std::log(Y);
  double lo = 0.0;
  bool first = true;
  while (lo < A) {
    double w = first ? std::min(0.05, A - lo) : std::min(width0, A - lo);
    first = false;
    double mid = lo + 0.5 * w, half = 0.5 * w;
    for (int i = 0; i < 16; ++i) {
      double u = mid + half * gl16::node[i];
      cplx pos = mx_at(gammaord + u) * gamma_fn(cplx(0.0, u)) * unit_phase(u * lnY);
      cplx neg = mx_at(gammaord - u) * gamma_fn(cplx(0.0, -u)) * unit_phase(-u * lnY);
      acc.add((half * gl16::weight[i]) * (pos + neg));
    }
    lo += w;
  }
  return acc.value() / TWO_PI;
}

}  // namespace

DetectorReport detector_check(const DirichletCharacter& chi, const CriticalZero& zero, double X,
                              double Y, double C, double tol, const Options& opt) {
  if (!(X >= 2.0 && Y * Y >= X)) throw domain_error("detector_check: need 2 <= X <= Y^2");
  if (Y * Y > 2e7) throw domain_error("detector_check: Y^2 exceeds the coefficient table cap");
  if (!(C > 0)) throw domain_error("detector_check: C > 0 required");

  const u64 q = chi.modulus();
  const double gamma_ord = zero.gamma;
  const cplx rho(0.5, gamma_ord);

  // coefficient table long enough that the e^{-n/Y} tail below 1e-16 is kept
  u64 nmax = std::max((u64)std::ceil(Y * Y), (u64)std::ceil(Y * 45.0));
  lfunc::MollifierCoefficients mc = lfunc::mollifier_coefficients(X, nmax);

  DetectorReport rep;
  rep.zero = zero;
  rep.X = X;
  rep.Y = Y;
  rep.C = C;

  // R1 sum over X < n <= Y^2, plus the full smoothed sum for the identity
  kahan_csum r1acc, fullacc;
  fullacc.add(std::exp(-1.0 / Y));  // n = 1 term; m[n] = 0 for 1 < n <= X
  for (u64 n = (u64)std::floor(X) + 1; n <= nmax; ++n) {
    if (mc.m[n] == 0) continue;
    cplx cv = chi.value((i64)n);
    if (cv == cplx(0.0, 0.0)) continue;
    cplx term = (double)mc.m[n] * cv * pow_neg_s(std::log((double)n), 0.5, gamma_ord) *
                std::exp(-(double)n / Y);
    if ((double)n <= Y * Y) r1acc.add(term);
    fullacc.add(term);
  }
  rep.r1_value = std::abs(r1acc.value());

  // mollified L at a point: M_X(s) L(s)
  std::vector<std::pair<u64, cplx>> mob;
  for (u64 d = 1; (double)d <= X; ++d) {
    int mu = arith::moebius(d);
    if (mu) mob.push_back({d, cplx((double)mu, 0.0)});
  }
  std::vector<cplx> tab(q);
  for (u64 a = 0; a < q; ++a) tab[a] = chi.value((i64)a);
  auto mx_on_line = [&](double sig, double t) -> cplx {
    cplx M = lfunc::dirichlet_polynomial(mob, {sig, t}, &chi);
    lfunc::EvalResult L = lfunc::l_value_oracle({sig, t}, chi, opt.eval, &tab);
    return M * L.value;
  };

  // R2: window of half-width C log qT around gamma, on the critical line
  double A = C * std::log((double)q * (std::abs(gamma_ord) + 2.0));
  auto mx_crit = [&](double t) { return mx_on_line(0.5, t); };
  rep.r2_value = std::abs(detector_line_integral(mx_crit, gamma_ord, A, Y, 0.5));

  // identity: full smoothed sum = MX(rho) + (1/2 pi i) Int_{(-1/4)} MX(rho+w) Gamma(w) Y^w dw
  double lnY = std::log(Y);
  auto shifted = [&](double u) -> cplx {
    cplx w(-0.25, u);
    return mx_on_line(0.25, gamma_ord + u) * gamma_fn(w) * std::exp(w * lnY);
  };
  double halfwidth = 6.0;
  while (std::abs(gamma_fn(cplx(-0.25, halfwidth))) * std::pow(Y, -0.25) > 1e-17 &&
         halfwidth < 200.0)
    halfwidth += 2.0;
  quad_result qr = integrate_adaptive(shifted, -halfwidth, halfwidth, 0.5, tol * 1e-2);
  if (qr.err > tol)
    throw accuracy_error("detector_check: shifted-contour quadrature did not converge");
  cplx shifted_integral = qr.value / TWO_PI;
  cplx residue = mx_on_line(0.5, gamma_ord);
  rep.residue_magnitude = std::abs(residue);
  rep.identity_residual = std::abs(fullacc.value() - (residue + shifted_integral));

  bool c1 = rep.r1_value >= 1.0 / 6.0, c2 = rep.r2_value >= 1.0 / 6.0;
  rep.cls = c1 && c2 ? DetectorClass::both
            : c1     ? DetectorClass::r1
            : c2     ? DetectorClass::r2
                     : DetectorClass::neither;
  return rep;
}

std::vector<std::pair<std::string, double>> zero_density_bounds(double sigma, double Q, double T) {
  if (!(sigma > 0.5 && sigma < 1.0))
    throw domain_error("zero_density_bounds: sigma must lie in (1/2, 1)");
  if (!(Q >= 2 && T >= 2)) throw domain_error("zero_density_bounds: Q, T >= 2 required");
  const double s = sigma, QT = Q * T;
  auto pw = [](double b, double e) { return std::pow(b, e); };
  const double zeta_exp = 4.0 * (1.0 - s) / (3.0 - 2.0 * s);
  const double q4t3 = pw(Q, 4.0 * (1.0 - s)) * pw(T, 3.0 * (1.0 - s));

  std::vector<std::pair<std::string, double>> rows;
  rows.emplace_back("o2_jutila", pw(QT, (7.0 - 6.0 * s) / (6.0 - 4.0 * s)));
  rows.emplace_back("o2_fourth_moment", std::min(pw(Q * Q * Q * T * T * T * T, (1.0 - s) / (2.0 - s)),
                                                 pw(QT, 3.0 * (1.0 - s) / s)));
  rows.emplace_back("o2_second_moment", std::min(pw(QT, zeta_exp), q4t3));
  rows.emplace_back("o3_fourth_moment",
                    std::min(pw(Q, (125.0 - 108.0 * s) / (90.0 - 72.0 * s)) *
                                 pw(T, (49.0 - 44.0 * s) / (22.0 - 8.0 * s)),
                             pw(QT, 7.0 * (1.0 - s) / (2.0 * s))));
  rows.emplace_back("o4_fourth_moment",
                    std::min(pw(Q, (41.0 - 36.0 * s) / (30.0 - 24.0 * s)) *
                                 pw(T, (49.0 - 44.0 * s) / (22.0 - 8.0 * s)),
                             pw(QT, 7.0 * (1.0 - s) / (2.0 * s))));
  rows.emplace_back("o3_second_moment",
                    std::min({pw(Q, (16.0 - 10.0 * s) / 9.0) * pw(T, zeta_exp),
                              pw(Q, 16.0 * (1.0 - s) / (9.0 - 6.0 * s)) * pw(T, zeta_exp), q4t3}));
  rows.emplace_back("o4_second_moment",
                    std::min({pw(Q, (5.0 - 3.0 * s) / 3.0) * pw(T, zeta_exp),
                              pw(Q, 5.0 * (1.0 - s) / (3.0 - 2.0 * s)) * pw(T, zeta_exp), q4t3}));
  rows.emplace_back("v_parameter", pw(Q, (4.0 * s - 3.0) / 2.0) * pw(T, (3.0 * s - 2.0) / 2.0));
  return rows;
}

FamilyZeroCount family_zero_count(const CharacterFamily& fam, double sigma, double T,
                                  const Options& opt) {
  FamilyZeroCount out;
  out.per_character.resize(fam.members.size());
  parallel_for(fam.members.size(), opt.workers, [&](std::size_t i) {
    const auto& chi = fam.members[i];
    ZeroCountReport base{}, halved{};
    bool done = false;
    for (double ds : {0.0, 1e-4, -1e-4}) {
      try {
        Options o1 = opt, o2 = opt;
        o2.grid_scale = opt.grid_scale * 0.5;
        base = count_zeros_rectangle(chi, sigma + ds, T, o1);
        halved = count_zeros_rectangle(chi, sigma + ds, T, o2);
        done = true;
        break;
      } catch (const accuracy_error&) {
        continue;
      }
    }
    if (!done)
      throw accuracy_error("family_zero_count: contour rejected for the character mod " +
                           std::to_string(chi.modulus()) + " even after perturbing sigma");
    if (base.count != halved.count)
      throw accuracy_error("family_zero_count: step-halving changed the count for the character "
                           "mod " +
                           std::to_string(chi.modulus()));
    base.winding_residual = std::max(base.winding_residual, halved.winding_residual);
    out.per_character[i] = base;
  });
  for (auto& r : out.per_character) out.total += r.count;
  out.bounds = zero_density_bounds(sigma, fam.Q, T);
  return out;
}

}  // namespace lfam::zeros
