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

#ifndef LFAM_ARITH_HPP
#define LFAM_ARITH_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace lfam::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Trial division is the whole factoring story here; moduli stay desk-sized.
inline constexpr u64 FACTOR_CAP = 1'000'000'000'000ULL;  // 1e12

struct Factorization {
  u64 n = 1;
  std::vector<std::pair<u64, int>> factors;  // (prime, exponent), primes increasing
};

Factorization factorize(u64 n);

// 0 if n is not squarefree, else (-1)^{number of prime factors}.
int moebius(u64 n);

// Number of ordered ways to write n as a product of k factors;
// multiplicative with tau_k(p^e) = binomial(e+k-1, k-1).
i64 tau_k(u64 n, int k);

// m = n * l^2 with n squarefree; returns (n, l).
std::pair<u64, u64> squarefree_decompose(u64 m);

// Mobius values for 1..nmax (index 0 unused).
std::vector<int> moebius_sieve(u64 nmax);

// tau_k values for 1..nmax (index 0 unused).
std::vector<i64> tau_k_sieve(u64 nmax, int k);

u64 powmod(u64 base, u64 exp, u64 mod);
u64 gcd(u64 a, u64 b);

// Structure of (Z/q)^* as a product of cyclic components, one per odd
// prime power plus the split 2-power part.  For p = 2, e >= 3 the fixed
// generator pair is (-1 mod 2^e, 5 mod 2^e) with orders (2, 2^{e-2}) so
// exponent vectors are reproducible across runs.
struct UnitGroupComponent {
  u64 p = 0;
  int e = 0;
  std::vector<u64> generators;
  std::vector<u64> orders;
  // dlog[residue mod p^e] -> flattened exponent(s); -1 marks non-units.
  std::vector<std::vector<i64>> dlog_tables;  // one table per generator
  u64 pe = 1;
};

struct UnitGroupStructure {
  u64 q = 1;
  u64 phi = 1;
  std::vector<UnitGroupComponent> components;  // ordered by p
  // Total number of generator slots across components.
  int rank() const;
};

// Builds (and internally caches per q) the unit group with dlog tables.
std::shared_ptr<const UnitGroupStructure> unit_group(u64 q);

// Exponent vector of n with respect to the group's generators, flattened
// component by component.  Throws domain_error when gcd(n, q) > 1.
std::vector<i64> discrete_log(const UnitGroupStructure& g, i64 n);

}  // namespace lfam::arith

#endif
