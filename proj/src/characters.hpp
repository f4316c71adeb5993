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

#ifndef LFAM_CHARACTERS_HPP
#define LFAM_CHARACTERS_HPP

#include <memory>
#include <vector>

#include "arith.hpp"
#include "numeric.hpp"

namespace lfam::chars {

using arith::i64;
using arith::u64;

inline constexpr u64 MODULUS_CAP = 1'000'000;  // enumeration works with dlog tables of size q

// A Dirichlet character mod q, stored as an exponent vector against the
// canonical generators from arith::unit_group.  Values are exact roots of
// unity: the phase of chi(n) is the integer phase_of(n) over phase_den()
// (so equality tests never touch floating point).  Immutable after
// construction; safe to share across threads.
class DirichletCharacter {
public:
  DirichletCharacter(u64 q, std::vector<i64> exponents);

  u64 modulus() const { return q_; }
  const std::vector<i64>& exponents() const { return exps_; }
  u64 order() const { return order_; }
  int parity() const { return parity_; }  // 0 even, 1 odd
  u64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == q_; }
  bool is_principal() const { return order_ == 1; }

  // chi(n); 0 when gcd(n, q) > 1.
  cplx value(i64 n) const;

  // Integer phase r with chi(n) = e^{2 pi i r / phase_den()}, or -1 when
  // gcd(n, q) > 1.
  i64 phase_of(i64 n) const;
  i64 phase_den() const { return group_exponent_; }

  DirichletCharacter conjugate() const;

  // Orders before (q, exponents); enumeration order and cache keys rely on it.
  bool operator<(const DirichletCharacter& o) const;
  bool operator==(const DirichletCharacter& o) const {
    return q_ == o.q_ && exps_ == o.exps_;
  }

  const arith::UnitGroupStructure& group() const { return *group_; }

private:
  u64 q_;
  std::vector<i64> exps_;
  std::shared_ptr<const arith::UnitGroupStructure> group_;
  std::vector<i64> phase_mult_;  // per generator slot: e_i * (L / ord_i) mod L
  i64 group_exponent_ = 1;       // L = lcm of generator orders
  u64 order_ = 1;
  int parity_ = 0;
  u64 conductor_ = 1;
};

// All phi(q) characters mod q in canonical (lexicographic exponent) order.
std::vector<DirichletCharacter> enumerate_characters(u64 q);

// Least modulus of a character inducing chi, plus primitivity.
std::pair<u64, bool> conductor_and_primitivity(const DirichletCharacter& chi);

// The family O_j(Q): primitive characters of exact order j with conductor
// in (Q, 2Q], sorted by (q, exponent vector).  Conjugates always appear
// together since conjugation preserves order, conductor and modulus.
struct CharacterFamily {
  int order_j = 2;
  double Q = 2;
  std::vector<DirichletCharacter> members;
};

CharacterFamily enumerate_family(int j, double Q, unsigned workers = 1);

// Gauss sum of a primitive character; |result| = sqrt(q).
cplx gauss_sum(const DirichletCharacter& chi);

// epsilon(chi) = gauss_sum(chi) / (i^kappa sqrt(q)); modulus 1.
cplx root_number(const DirichletCharacter& chi);

}  // namespace lfam::chars

#endif
