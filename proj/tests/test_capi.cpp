#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "lfam/lfam.h"

namespace {

struct ctx_holder {
  lfam_ctx* ctx = lfam_ctx_new();
  ~ctx_holder() { lfam_ctx_free(ctx); }
};

}  // namespace

TEST_CASE("version and context") {
  CHECK(std::strcmp(lfam_version(), "0.1.0") == 0);

  ctx_holder h;
  REQUIRE(h.ctx);
  double v = 0;
  CHECK(lfam_ctx_get(h.ctx, "tol", &v) == LFAM_OK);
  CHECK(v == 1e-12);
  CHECK(lfam_ctx_set(h.ctx, "workers", 4) == LFAM_OK);
  CHECK(lfam_ctx_get(h.ctx, "workers", &v) == LFAM_OK);
  CHECK(v == 4);
  CHECK(lfam_ctx_set(h.ctx, "no_such_key", 1) == LFAM_ERR_USAGE);
  CHECK(std::strlen(lfam_last_error()) > 0);
}

TEST_CASE("arith surface") {
  int m = 0;
  CHECK(lfam_moebius(6, &m) == LFAM_OK);
  CHECK(m == 1);
  CHECK(lfam_moebius(0, &m) == LFAM_ERR_USAGE);

  int64_t t = 0;
  CHECK(lfam_tau_k(6, 2, &t) == LFAM_OK);
  CHECK(t == 4);

  int64_t sf = 0, rt = 0;
  CHECK(lfam_squarefree_decompose(12, &sf, &rt) == LFAM_OK);
  CHECK(sf == 3);
  CHECK(rt == 2);

  int64_t primes[8];
  int exps[8];
  size_t cnt = 0;
  CHECK(lfam_factorize(12, primes, exps, 8, &cnt) == LFAM_OK);
  REQUIRE(cnt == 2);
  CHECK(primes[0] == 2);
  CHECK(exps[0] == 2);
  CHECK(primes[1] == 3);
  CHECK(exps[1] == 1);
}

TEST_CASE("character lifecycle and errors") {
  size_t phi = 0;
  REQUIRE(lfam_character_count(4, &phi) == LFAM_OK);
  REQUIRE(phi == 2);

  lfam_character* chi = nullptr;
  REQUIRE(lfam_character_get(4, 1, &chi) == LFAM_OK);
  REQUIRE(chi);
  CHECK(lfam_character_modulus(chi) == 4);
  CHECK(lfam_character_order(chi) == 2);
  CHECK(lfam_character_parity(chi) == 1);
  CHECK(lfam_character_conductor(chi) == 4);
  CHECK(lfam_character_is_primitive(chi) == 1);

  lfam_complex v{};
  CHECK(lfam_character_value(chi, 3, &v) == LFAM_OK);
  CHECK(v.re == doctest::Approx(-1.0));
  CHECK(lfam_character_value(chi, 2, &v) == LFAM_OK);
  CHECK(v.re == 0.0);

  lfam_complex tau{};
  CHECK(lfam_gauss_sum(chi, &tau) == LFAM_OK);
  CHECK(tau.im == doctest::Approx(2.0).epsilon(1e-12));

  lfam_character* bad = nullptr;
  CHECK(lfam_character_get(4, 7, &bad) == LFAM_ERR_DOMAIN);
  CHECK(bad == nullptr);

  // gauss sum of an imprimitive character fails with a domain error
  lfam_character* imp = nullptr;
  size_t phi9 = 0;
  REQUIRE(lfam_character_count(9, &phi9) == LFAM_OK);
  for (size_t i = 0; i < phi9; ++i) {
    lfam_character* c = nullptr;
    REQUIRE(lfam_character_get(9, i, &c) == LFAM_OK);
    if (lfam_character_order(c) == 2)
      imp = c;
    else
      lfam_character_free(c);
  }
  REQUIRE(imp);
  CHECK(lfam_character_is_primitive(imp) == 0);
  CHECK(lfam_gauss_sum(imp, &tau) == LFAM_ERR_DOMAIN);
  lfam_character_free(imp);
  lfam_character_free(chi);
}

TEST_CASE("family surface") {
  ctx_holder h;
  lfam_family* fam = nullptr;
  REQUIRE(lfam_family_enumerate(h.ctx, 3, 6, &fam) == LFAM_OK);
  REQUIRE(fam);
  REQUIRE(lfam_family_size(fam) == 4);
  const lfam_character* first = lfam_family_get(fam, 0);
  REQUIRE(first);
  CHECK(lfam_character_modulus(first) == 7);
  CHECK(lfam_character_order(first) == 3);
  CHECK(lfam_family_get(fam, 10) == nullptr);
  lfam_family_free(fam);
}

TEST_CASE("evaluation surface") {
  ctx_holder h;
  lfam_eval_result r{};
  CHECK(lfam_hurwitz_zeta(h.ctx, 2.0, 0.0, 1.0, &r) == LFAM_OK);
  CHECK(r.value.re == doctest::Approx(1.6449340668482264).epsilon(1e-12));
  CHECK(lfam_hurwitz_zeta(h.ctx, 1.0, 0.0, 1.0, &r) == LFAM_ERR_DOMAIN);

  lfam_character* chi = nullptr;
  REQUIRE(lfam_character_get(4, 1, &chi) == LFAM_OK);
  lfam_eval_result oracle{}, afe{};
  CHECK(lfam_l_value(h.ctx, chi, 0.5, 0.0, LFAM_METHOD_HURWITZ_ORACLE, &oracle) == LFAM_OK);
  CHECK(oracle.value.re == doctest::Approx(0.6676914571).epsilon(1e-9));
  CHECK(lfam_l_value(h.ctx, chi, 0.5, 0.0, LFAM_METHOD_SMOOTHED_AFE, &afe) == LFAM_OK);
  CHECK(std::abs(afe.value.re - oracle.value.re) < 1e-8);
  CHECK(afe.method == LFAM_METHOD_SMOOTHED_AFE);
  CHECK(lfam_l_value(h.ctx, chi, 0.5, 0.0, 9, &oracle) == LFAM_ERR_USAGE);

  lfam_eval_result d{};
  CHECK(lfam_l_derivative(h.ctx, chi, 0.5, 1.0, &d) == LFAM_OK);
  CHECK(std::isfinite(d.value.re));

  std::vector<int64_t> mc(11, -99);
  CHECK(lfam_mollifier_coefficients(3.0, 10, mc.data()) == LFAM_OK);
  CHECK(mc[1] == 1);
  CHECK(mc[4] == 0);
  CHECK(mc[6] == -1);

  double resid = 0;
  CHECK(lfam_mellin_identity_residual(h.ctx, chi, 0.5, 0.0, 1, 20.0, -0.25, &resid) == LFAM_OK);
  CHECK(resid < 1e-6);
  CHECK(lfam_mellin_identity_residual(h.ctx, chi, 0.5, 0.0, 1, 20.0, 0.5, &resid) ==
        LFAM_ERR_DOMAIN);
  lfam_character_free(chi);
}

TEST_CASE("moment and sieve surface") {
  ctx_holder h;
  lfam_family* fam = nullptr;
  REQUIRE(lfam_family_enumerate(h.ctx, 2, 2, &fam) == LFAM_OK);

  lfam_moment_report mr{};
  std::vector<double> per(lfam_family_size(fam));
  CHECK(lfam_family_moment_fixed_t(h.ctx, fam, 0.0, 1, &mr, per.data()) == LFAM_OK);
  CHECK(mr.value > 0);
  CHECK(mr.value == doctest::Approx(per[0] + per[1]).epsilon(1e-12));

  CHECK(lfam_integrated_family_moment(h.ctx, fam, 2.0, 1, 1e-5, &mr, nullptr) == LFAM_OK);
  CHECK(mr.value > 0);
  CHECK(mr.quadrature_error <= 1e-5 * mr.value);

  // discrete with singleton sets through the C surface
  const lfam_character* chi0 = lfam_family_get(fam, 0);
  double pts0[1] = {0.0}, pts1[1] = {0.0};
  const double* sets[2] = {pts0, pts1};
  size_t sizes[2] = {1, 1};
  lfam_moment_report dr{};
  CHECK(lfam_discrete_family_moment(h.ctx, fam, 5.0, 1.0, sets, sizes, 1, &dr, nullptr) ==
        LFAM_OK);
  CHECK(dr.value > 0);
  CHECK(dr.integrated_comparison > 0);

  double points[64];
  size_t np = 0;
  CHECK(lfam_generate_wellspaced(h.ctx, chi0, 5.0, 1.0, LFAM_SPACING_GRID, points, 64, &np) ==
        LFAM_OK);
  CHECK(np == 10);

  double db = 0;
  CHECK(lfam_delta_bound(2, 10, 10, 100, &db) == LFAM_OK);
  CHECK(db == doctest::Approx(200.0));
  CHECK(lfam_delta_bound(5, 10, 10, 100, &db) == LFAM_ERR_DOMAIN);

  lfam_sieve_report sr{};
  CHECK(lfam_sieve_discrete(h.ctx, fam, 10.0, 1, &sr) == LFAM_OK);
  CHECK(sr.lhs >= 0);
  CHECK(sr.norm > 0);
  CHECK(lfam_sieve_integrated(h.ctx, fam, 4.0, 10.0, 1, &sr) == LFAM_OK);
  CHECK(sr.mode == 1);

  double lhs = 0, rhs = 0;
  int holds = 0;
  CHECK(lfam_gallagher_l(h.ctx, chi0, 5.0, 1.0, points, np, &lhs, &rhs, nullptr, nullptr,
                         &holds) == LFAM_OK);
  CHECK(holds == 1);

  double mv_lhs = 0, r1 = 0, r2 = 0;
  long long npts = 0;
  CHECK(lfam_meanvalue(h.ctx, fam, 6.0, 1.0, 0.6, 12.0, 7, &mv_lhs, &r1, &r2, &npts) == LFAM_OK);
  CHECK(mv_lhs >= 0);
  CHECK(npts > 0);

  double ehq[4] = {10, 10, 20, 20}, eht[4] = {10, 20, 10, 20}, ehv[4];
  for (int i = 0; i < 4; ++i) ehv[i] = ehq[i] * ehq[i] * eht[i];
  double alpha = 0, beta = 0;
  CHECK(lfam_exponent_fit(ehq, eht, ehv, 4, &alpha, &beta, nullptr, nullptr) == LFAM_OK);
  CHECK(alpha == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(beta == doctest::Approx(1.0).epsilon(1e-9));

  double l31l = 0, l31r = 0, l31n = 0;
  int degen = 0;
  CHECK(lfam_lemma31_comparison(h.ctx, fam, 4.0, 0.0, 0.1, &l31l, &l31r, &l31n, &degen) ==
        LFAM_OK);
  CHECK(l31l > 0);

  lfam_family_free(fam);
}

TEST_CASE("zero surface") {
  ctx_holder h;
  lfam_character* chi = nullptr;
  REQUIRE(lfam_character_get(4, 1, &chi) == LFAM_OK);

  long long count = -1;
  double resid = 0;
  CHECK(lfam_count_zeros_rectangle(h.ctx, chi, 0.55, 10.0, &count, &resid) == LFAM_OK);
  CHECK(count == 0);
  CHECK(resid < 0.25);

  lfam_zero_list* zl = nullptr;
  REQUIRE(lfam_critical_line_zeros(h.ctx, chi, 12.0, &zl) == LFAM_OK);
  REQUIRE(zl);
  REQUIRE(lfam_zero_list_size(zl) > 0);
  double gamma = 0, width = 0;
  CHECK(lfam_zero_list_get(zl, 0, &gamma, &width) == LFAM_OK);
  CHECK(width <= 1.1e-8);
  CHECK(lfam_zero_list_get(zl, 9999, &gamma, &width) == LFAM_ERR_USAGE);

  // first positive ordinate
  double first_pos = 0;
  for (size_t i = 0; i < lfam_zero_list_size(zl); ++i) {
    lfam_zero_list_get(zl, i, &gamma, &width);
    if (gamma > 0) {
      first_pos = gamma;
      break;
    }
  }
  REQUIRE(first_pos > 0);
  lfam_detector_report det{};
  CHECK(lfam_detector_check(h.ctx, chi, first_pos, 10.0, 30.0, 2.0, &det) == LFAM_OK);
  CHECK(det.identity_residual <= 1e-6);
  CHECK(det.r1_value + det.r2_value >= 0.8);
  lfam_zero_list_free(zl);

  size_t nb = lfam_zero_density_bound_count();
  REQUIRE(nb == 8);
  std::vector<double> vals(nb);
  CHECK(lfam_zero_density_bounds(0.75, 10.0, 10.0, vals.data(), nb) == LFAM_OK);
  CHECK(std::string(lfam_zero_density_bound_name(2)) == "o2_second_moment");
  CHECK(vals[2] == doctest::Approx(21.544346900318832).epsilon(1e-12));
  CHECK(lfam_zero_density_bounds(0.75, 10.0, 10.0, vals.data(), 3) == LFAM_ERR_USAGE);

  lfam_family* fam = nullptr;
  REQUIRE(lfam_family_enumerate(h.ctx, 2, 4, &fam) == LFAM_OK);
  long long total = -1;
  std::vector<long long> pc(lfam_family_size(fam));
  std::vector<double> wr(lfam_family_size(fam));
  CHECK(lfam_family_zero_count(h.ctx, fam, 0.55, 6.0, &total, pc.data(), wr.data()) == LFAM_OK);
  CHECK(total == 0);
  for (double r : wr) CHECK(r < 0.25);
  lfam_family_free(fam);
  lfam_character_free(chi);
}

TEST_CASE("worker count does not change results") {
  ctx_holder a, b;
  REQUIRE(lfam_ctx_set(b.ctx, "workers", 4) == LFAM_OK);
  lfam_family* f1 = nullptr;
  lfam_family* f2 = nullptr;
  REQUIRE(lfam_family_enumerate(a.ctx, 3, 20, &f1) == LFAM_OK);
  REQUIRE(lfam_family_enumerate(b.ctx, 3, 20, &f2) == LFAM_OK);
  REQUIRE(lfam_family_size(f1) == lfam_family_size(f2));

  lfam_moment_report r1{}, r2{};
  std::vector<double> p1(lfam_family_size(f1)), p2(lfam_family_size(f2));
  REQUIRE(lfam_integrated_family_moment(a.ctx, f1, 3.0, 1, 1e-5, &r1, p1.data()) == LFAM_OK);
  REQUIRE(lfam_integrated_family_moment(b.ctx, f2, 3.0, 1, 1e-5, &r2, p2.data()) == LFAM_OK);
  CHECK(r1.value == r2.value);  // bitwise
  for (size_t i = 0; i < p1.size(); ++i) CHECK(p1[i] == p2[i]);

  lfam_sieve_report s1{}, s2{};
  REQUIRE(lfam_sieve_integrated(a.ctx, f1, 4.0, 20.0, 9, &s1) == LFAM_OK);
  REQUIRE(lfam_sieve_integrated(b.ctx, f2, 4.0, 20.0, 9, &s2) == LFAM_OK);
  CHECK(s1.lhs == s2.lhs);

  lfam_family_free(f1);
  lfam_family_free(f2);
}
