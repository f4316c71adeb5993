#include <numeric>

#include "arith.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace lfam;
using namespace lfam::arith;

TEST_CASE("factorize basics") {
  CHECK(factorize(1).factors.empty());

  auto f12 = factorize(12);
  REQUIRE(f12.factors.size() == 2);
  CHECK(f12.factors[0] == std::pair<u64, int>{2, 2});
  CHECK(f12.factors[1] == std::pair<u64, int>{3, 1});

  // product of the first 8 primes
  auto fp = factorize(9699690);
  std::vector<u64> primes;
  u64 prod = 1;
  for (auto& [p, e] : fp.factors) {
    CHECK(e == 1);
    primes.push_back(p);
    prod *= p;
  }
  CHECK(primes == std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19});
  CHECK(prod == 9699690);

  CHECK_THROWS_AS(factorize(0), domain_error);
  CHECK_THROWS_AS(factorize(FACTOR_CAP + 1), domain_error);

  // primes strictly increasing and exponents positive on a few awkward inputs
  for (u64 n : {2ULL, 97ULL, 1024ULL, 999983ULL, 735134400ULL}) {
    auto f = factorize(n);
    u64 last = 0, acc = 1;
    for (auto& [p, e] : f.factors) {
      CHECK(p > last);
      CHECK(e >= 1);
      last = p;
      for (int i = 0; i < e; ++i) acc *= p;
    }
    CHECK(acc == n);
  }
}

TEST_CASE("moebius values and divisor-sum identity") {
  CHECK(moebius(1) == 1);
  CHECK(moebius(12) == 0);
  CHECK(moebius(6) == 1);
  CHECK(moebius(30) == -1);

  // sum_{d|n} mu(d) = [n == 1] for n <= 1e4, brute-force divisor loop
  for (u64 n = 1; n <= 10000; ++n) {
    long long s = 0;
    for (u64 d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      s += moebius(d);
      if (d != n / d) s += moebius(n / d);
    }
    CHECK(s == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("moebius sieve matches pointwise moebius") {
  auto mu = moebius_sieve(5000);
  for (u64 n = 1; n <= 5000; ++n) CHECK(mu[n] == moebius(n));
}

TEST_CASE("tau_k") {
  for (u64 n : {1ULL, 2ULL, 17ULL, 360ULL}) CHECK(tau_k(n, 1) == 1);
  CHECK(tau_k(1, 7) == 1);
  CHECK(tau_k(6, 2) == 4);
  CHECK(tau_k(4, 3) == 6);
  for (int k = 1; k <= 6; ++k) {
    CHECK(tau_k(7, k) == k);
    CHECK(tau_k(101, k) == k);
  }
  auto t3 = tau_k_sieve(2000, 3);
  for (u64 n = 1; n <= 2000; ++n) CHECK(t3[n] == tau_k(n, 3));
}

TEST_CASE("squarefree decomposition") {
  CHECK(squarefree_decompose(1) == std::pair<u64, u64>{1, 1});
  CHECK(squarefree_decompose(12) == std::pair<u64, u64>{3, 2});
  CHECK(squarefree_decompose(8) == std::pair<u64, u64>{2, 2});

  auto mu = moebius_sieve(1000000);
  for (u64 m = 1; m <= 1000000; ++m) {
    auto [n, l] = squarefree_decompose(m);
    CHECK(n * l * l == m);
    CHECK(mu[n] != 0);
  }
}

namespace {

// CRT reconstruction of a unit from its exponent vector, used as the
// independent round-trip oracle for discrete_log.
u64 reconstruct(const UnitGroupStructure& g, const std::vector<i64>& exps) {
  u64 x = 0, mod = 1;
  int slot = 0;
  for (auto& c : g.components) {
    u64 v = 1;
    for (std::size_t i = 0; i < c.generators.size(); ++i, ++slot)
      v = (u64)((unsigned __int128)v * powmod(c.generators[i], (u64)exps[slot], c.pe) % c.pe);
    // combine x mod `mod` with v mod c.pe
    u64 m2 = c.pe;
    u64 inc = mod;
    u64 y = x;
    while (y % m2 != v % m2) y += inc;
    x = y;
    mod *= m2;
  }
  return x % g.q;
}

}  // namespace

TEST_CASE("unit group structure") {
  auto g9 = unit_group(9);
  REQUIRE(g9->components.size() == 1);
  CHECK(g9->phi == 6);
  CHECK(g9->components[0].p == 3);
  CHECK(g9->components[0].e == 2);
  REQUIRE(g9->components[0].orders.size() == 1);
  CHECK(g9->components[0].orders[0] == 6);

  auto g8 = unit_group(8);
  REQUIRE(g8->components.size() == 1);
  CHECK(g8->components[0].orders == std::vector<u64>{2, 2});
  CHECK(g8->components[0].generators[0] == 7);  // -1 mod 8
  CHECK(g8->components[0].generators[1] == 5);

  auto g15 = unit_group(15);
  REQUIRE(g15->components.size() == 2);
  CHECK(g15->components[0].orders == std::vector<u64>{2});
  CHECK(g15->components[1].orders == std::vector<u64>{4});
  CHECK(g15->phi == 8);
}

TEST_CASE("discrete log round-trips") {
  auto g9 = unit_group(9);
  CHECK(discrete_log(*g9, 1) == std::vector<i64>{0});
  u64 gen = g9->components[0].generators[0];
  CHECK(discrete_log(*g9, (i64)gen) == std::vector<i64>{1});
  CHECK_THROWS_AS(discrete_log(*g9, 3), domain_error);

  auto g15 = unit_group(15);
  CHECK(reconstruct(*g15, discrete_log(*g15, 2)) == 2);

  for (u64 q = 3; q <= 500; ++q) {
    auto g = unit_group(q);
    for (u64 n = 1; n < q; ++n) {
      if (gcd(n, q) != 1) continue;
      CHECK(reconstruct(*g, discrete_log(*g, (i64)n)) == n);
    }
  }
}
