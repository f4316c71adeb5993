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

#include "arith.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace lfam::arith {

u64 gcd(u64 a, u64 b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

u64 powmod(u64 base, u64 exp, u64 mod) {
  if (mod == 1) return 0;
  u64 r = 1;
  base %= mod;
  while (exp) {
    if (exp & 1) r = (u64)((unsigned __int128)r * base % mod);
    base = (u64)((unsigned __int128)base * base % mod);
    exp >>= 1;
  }
  return r;
}

Factorization factorize(u64 n) {
  if (n == 0) throw domain_error("factorize: n must be positive");
  if (n > FACTOR_CAP)
    throw domain_error("factorize: n = " + std::to_string(n) + " exceeds the trial-division cap " +
                       std::to_string(FACTOR_CAP));
  Factorization f;
  f.n = n;
  auto strip = [&](u64 p) {
    if (n % p) return;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (u64 d = 5; d * d <= n; d += 6) {
    strip(d);
    strip(d + 2);
  }
  if (n > 1) f.factors.emplace_back(n, 1);
  return f;
}

int moebius(u64 n) {
  if (n == 0) throw domain_error("moebius: n must be positive");
  Factorization f = factorize(n);
  for (auto& [p, e] : f.factors)
    if (e > 1) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

namespace {

i64 binomial_checked(i64 n, i64 k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (i64 i = 1; i <= k; ++i) {
    r = r * (unsigned __int128)(n - k + i) / (unsigned __int128)i;
    if (r > (unsigned __int128)INT64_MAX)
      throw domain_error("tau_k: value overflows 64 bits");
  }
  return (i64)r;
}

}  // namespace

i64 tau_k(u64 n, int k) {
  if (n == 0 || k < 1) throw domain_error("tau_k: need n >= 1 and k >= 1");
  if (k == 1) return 1;
  Factorization f = factorize(n);
  i64 r = 1;
  for (auto& [p, e] : f.factors) {
    i64 c = binomial_checked(e + k - 1, k - 1);
    if (r > INT64_MAX / c) throw domain_error("tau_k: value overflows 64 bits");
    r *= c;
  }
  return r;
}

std::pair<u64, u64> squarefree_decompose(u64 m) {
  if (m == 0) throw domain_error("squarefree_decompose: m must be positive");
  Factorization f = factorize(m);
  u64 n = 1, l = 1;
  for (auto& [p, e] : f.factors) {
    for (int i = 0; i < e / 2; ++i) l *= p;
    if (e % 2) n *= p;
  }
  return {n, l};
}

std::vector<int> moebius_sieve(u64 nmax) {
  std::vector<int> mu(nmax + 1, 1);
  std::vector<u64> spf(nmax + 1, 0);  // smallest prime factor
  if (nmax >= 1) mu[0] = 0;
  for (u64 i = 2; i <= nmax; ++i) {
    if (spf[i] == 0) {
      for (u64 j = i; j <= nmax; j += i)
        if (spf[j] == 0) spf[j] = i;
    }
  }
  for (u64 i = 2; i <= nmax; ++i) {
    u64 p = spf[i];
    u64 rest = i / p;
    mu[i] = rest % p == 0 ? 0 : -mu[rest];
  }
  return mu;
}

std::vector<i64> tau_k_sieve(u64 nmax, int k) {
  if (k < 1) throw domain_error("tau_k_sieve: k >= 1");
  std::vector<i64> t(nmax + 1, 1);
  if (nmax >= 1) t[0] = 0;
  if (k == 1) return t;
  std::vector<u64> spf(nmax + 1, 0);
  for (u64 i = 2; i <= nmax; ++i)
    if (spf[i] == 0)
      for (u64 j = i; j <= nmax; j += i)
        if (spf[j] == 0) spf[j] = i;
  for (u64 i = 2; i <= nmax; ++i) {
    u64 p = spf[i];
    int e = 0;
    u64 rest = i;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    t[i] = t[rest] * binomial_checked(e + k - 1, k - 1);
  }
  return t;
}

namespace {

u64 pow_u64(u64 b, int e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

// Smallest primitive root modulo an odd prime power p^e.
u64 primitive_root_odd(u64 p, int e) {
  u64 phi_p = p - 1;
  Factorization f = factorize(phi_p);
  auto is_root_mod_p = [&](u64 g) {
    for (auto& [q, _] : f.factors)
      if (powmod(g, phi_p / q, p) == 1) return false;
    return true;
  };
  u64 g = 2;
  while (!is_root_mod_p(g)) ++g;
  if (e == 1) return g;
  // g lifts to p^e unless g^{p-1} = 1 (mod p^2), in which case g+p works.
  u64 p2 = p * p;
  if (powmod(g, p - 1, p2) == 1) g += p;
  return g % pow_u64(p, e);
}

u64 element_order(u64 g, u64 mod, u64 group_order) {
  Factorization f = factorize(group_order);
  u64 ord = group_order;
  for (auto& [q, e] : f.factors)
    for (int i = 0; i < e; ++i)
      if (powmod(g, ord / q, mod) == 1) ord /= q;
  return ord;
}

UnitGroupComponent build_component(u64 p, int e) {
  UnitGroupComponent c;
  c.p = p;
  c.e = e;
  c.pe = pow_u64(p, e);
  if (p == 2) {
    if (e == 1) return c;  // trivial group, no generators
    if (e == 2) {
      c.generators = {3};
      c.orders = {2};
    } else {
      c.generators = {c.pe - 1, 5 % c.pe};  // -1 and 5
      c.orders = {2, c.pe / 4};
    }
  } else {
    u64 g = primitive_root_odd(p, e);
    u64 phi = c.pe / p * (p - 1);
    c.generators = {g};
    c.orders = {phi};
  }
  // exhaustive dlog tables per generator
  c.dlog_tables.assign(c.generators.size(), std::vector<i64>(c.pe, -1));
  if (c.generators.size() == 1) {
    u64 g = c.generators[0], x = 1;
    for (u64 i = 0; i < c.orders[0]; ++i) {
      c.dlog_tables[0][x] = (i64)i;
      x = (u64)((unsigned __int128)x * g % c.pe);
    }
  } else if (c.generators.size() == 2) {
    u64 m = c.pe;
    u64 five = 1;
    for (u64 k = 0; k < c.orders[1]; ++k) {
      u64 v0 = five, v1 = m - five;  // (+1)*5^k and (-1)*5^k
      c.dlog_tables[0][v0] = 0;
      c.dlog_tables[1][v0] = (i64)k;
      c.dlog_tables[0][v1] = 1;
      c.dlog_tables[1][v1] = (i64)k;
      five = (u64)((unsigned __int128)five * 5 % m);
    }
  }
  return c;
}

std::mutex group_cache_mu;
std::map<u64, std::shared_ptr<const UnitGroupStructure>> group_cache;

}  // namespace

int UnitGroupStructure::rank() const {
  int r = 0;
  for (auto& c : components) r += (int)c.generators.size();
  return r;
}

std::shared_ptr<const UnitGroupStructure> unit_group(u64 q) {
  if (q == 0) throw domain_error("unit_group: q must be positive");
  {
    std::lock_guard<std::mutex> lk(group_cache_mu);
    auto it = group_cache.find(q);
    if (it != group_cache.end()) return it->second;
  }
  auto g = std::make_shared<UnitGroupStructure>();
  g->q = q;
  Factorization f = factorize(q);
  for (auto& [p, e] : f.factors) {
    UnitGroupComponent c = build_component(p, e);
    for (u64 o : c.orders) g->phi *= o;
    g->components.push_back(std::move(c));
  }
  // verify generator orders: the advertised order really is the exact one
  for (auto& c : g->components) {
    u64 grp = c.pe / c.p * (c.p - 1);  // phi(p^e)
    for (std::size_t i = 0; i < c.generators.size(); ++i)
      if (element_order(c.generators[i], c.pe, grp) != c.orders[i])
        throw internal_error("unit_group: generator order mismatch");
  }
  std::lock_guard<std::mutex> lk(group_cache_mu);
  auto [it, _] = group_cache.emplace(q, std::move(g));
  return it->second;
}

std::vector<i64> discrete_log(const UnitGroupStructure& g, i64 n) {
  u64 q = g.q;
  u64 r = (u64)(((n % (i64)q) + (i64)q) % (i64)q);
  if (gcd(r, q) != 1)
    throw domain_error("discrete_log: argument shares a factor with the modulus");
  std::vector<i64> exps;
  exps.reserve(g.rank());
  for (auto& c : g.components) {
    u64 rc = r % c.pe;
    for (std::size_t i = 0; i < c.generators.size(); ++i) {
      i64 d = c.dlog_tables[i][rc];
      if (d < 0) throw internal_error("discrete_log: unit missing from table");
      exps.push_back(d);
    }
  }
  return exps;
}

}  // namespace lfam::arith
