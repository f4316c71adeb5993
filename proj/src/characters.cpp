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

#include "characters.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace lfam::chars {

namespace {

i64 lcm_i64(i64 a, i64 b) { return a / std::gcd(a, b) * b; }

}  // namespace

DirichletCharacter::DirichletCharacter(u64 q, std::vector<i64> exponents)
    : q_(q), exps_(std::move(exponents)), group_(arith::unit_group(q)) {
  if (q_ > MODULUS_CAP)
    throw domain_error("character: modulus exceeds cap " + std::to_string(MODULUS_CAP));
  int rank = group_->rank();
  if ((int)exps_.size() != rank)
    throw domain_error("character: exponent vector has wrong length");

  std::vector<i64> orders;
  for (auto& c : group_->components)
    for (u64 o : c.orders) orders.push_back((i64)o);

  group_exponent_ = 1;
  for (i64 o : orders) group_exponent_ = lcm_i64(group_exponent_, o);

  phase_mult_.resize(rank);
  order_ = 1;
  for (int i = 0; i < rank; ++i) {
    i64 o = orders[i];
    exps_[i] = ((exps_[i] % o) + o) % o;
    phase_mult_[i] = exps_[i] % o * (group_exponent_ / o) % group_exponent_;
    order_ = (u64)lcm_i64((i64)order_, o / std::gcd(o, exps_[i] == 0 ? o : exps_[i]));
  }

  i64 ph = phase_of(-1);
  if (ph == 0)
    parity_ = 0;
  else if (2 * ph == group_exponent_)
    parity_ = 1;
  else
    throw internal_error("character: chi(-1) is not +-1");

  conductor_ = conductor_and_primitivity(*this).first;
}

i64 DirichletCharacter::phase_of(i64 n) const {
  u64 r = (u64)(((n % (i64)q_) + (i64)q_) % (i64)q_);
  if (arith::gcd(r, q_) != 1) return -1;
  i64 ph = 0;
  int slot = 0;
  for (auto& c : group_->components) {
    u64 rc = r % c.pe;
    for (std::size_t i = 0; i < c.generators.size(); ++i, ++slot) {
      i64 d = c.dlog_tables[i][rc];
      ph = (ph + d % group_exponent_ * phase_mult_[slot]) % group_exponent_;
    }
  }
  return ph;
}

cplx DirichletCharacter::value(i64 n) const {
  i64 ph = phase_of(n);
  if (ph < 0) return {0.0, 0.0};
  if (ph == 0) return {1.0, 0.0};
  if (2 * ph == group_exponent_) return {-1.0, 0.0};
  // symmetric phase so conjugate characters give bitwise-conjugate values
  if (2 * ph > group_exponent_) ph -= group_exponent_;
  return unit_phase(TWO_PI * (double)ph / (double)group_exponent_);
}

DirichletCharacter DirichletCharacter::conjugate() const {
  std::vector<i64> e = exps_;
  int slot = 0;
  for (auto& c : group_->components)
    for (std::size_t i = 0; i < c.generators.size(); ++i, ++slot)
      e[slot] = ((i64)c.orders[i] - e[slot]) % (i64)c.orders[i];
  return DirichletCharacter(q_, std::move(e));
}

bool DirichletCharacter::operator<(const DirichletCharacter& o) const {
  if (q_ != o.q_) return q_ < o.q_;
  return exps_ < o.exps_;
}

std::vector<DirichletCharacter> enumerate_characters(u64 q) {
  if (q < 3) throw domain_error("enumerate_characters: q >= 3 required");
  if (q > MODULUS_CAP)
    throw domain_error("enumerate_characters: q exceeds cap " + std::to_string(MODULUS_CAP));
  auto g = arith::unit_group(q);
  std::vector<i64> orders;
  for (auto& c : g->components)
    for (u64 o : c.orders) orders.push_back((i64)o);
  int rank = (int)orders.size();
  std::vector<DirichletCharacter> out;
  out.reserve(g->phi);
  std::vector<i64> e(rank, 0);
  for (;;) {
    out.emplace_back(q, e);
    int i = rank - 1;
    while (i >= 0 && ++e[i] == orders[i]) e[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

std::pair<u64, bool> conductor_and_primitivity(const DirichletCharacter& chi) {
  u64 q = chi.modulus();
  // chi is induced mod d | q  iff  chi(n) = 1 for all n = 1 (mod d) coprime to q.
  for (u64 d = 1; d <= q; ++d) {
    if (q % d) continue;
    bool induced = true;
    for (u64 n = 1 + d; n <= q && induced; n += d)
      if (arith::gcd(n, q) == 1 && chi.phase_of((i64)n) != 0) induced = false;
    if (induced) return {d, d == q};
  }
  return {q, true};  // unreachable: d = q always passes
}

CharacterFamily enumerate_family(int j, double Q, unsigned workers) {
  if (j < 2) throw domain_error("enumerate_family: order j >= 2 required");
  if (Q < 2) throw domain_error("enumerate_family: Q >= 2 required");
  CharacterFamily fam;
  fam.order_j = j;
  fam.Q = Q;
  u64 lo = (u64)std::floor(Q) + 1;  // least integer > Q
  if ((double)(lo - 1) > Q - 1 && (double)(lo - 1) > Q) lo -= 1;
  u64 hi = (u64)std::floor(2 * Q);  // greatest integer <= 2Q
  if (hi < lo) return fam;
  std::size_t nq = hi - lo + 1;
  std::vector<std::vector<DirichletCharacter>> per_q(nq);
  parallel_for(nq, workers, [&](std::size_t i) {
    u64 q = lo + i;
    if (q < 3) return;
    for (auto& chi : enumerate_characters(q))
      if (chi.order() == (u64)j && chi.is_primitive()) per_q[i].push_back(chi);
  });
  for (auto& v : per_q)
    for (auto& chi : v) fam.members.push_back(std::move(chi));
  // enumeration emits exponent vectors in lexicographic order already;
  // sort anyway so the invariant never depends on that.
  std::sort(fam.members.begin(), fam.members.end());
  return fam;
}

cplx gauss_sum(const DirichletCharacter& chi) {
  if (!chi.is_primitive())
    throw domain_error("gauss_sum: character mod " + std::to_string(chi.modulus()) +
                       " is imprimitive");
  u64 q = chi.modulus();
  kahan_csum acc;
  for (u64 a = 1; a < q; ++a) {
    i64 ph = chi.phase_of((i64)a);
    if (ph < 0) continue;
    double theta = TWO_PI * ((double)ph / (double)chi.phase_den() + (double)a / (double)q);
    acc.add(unit_phase(theta));
  }
  cplx tau = acc.value();
  double want = std::sqrt((double)q);
  if (std::abs(std::abs(tau) - want) > 1e-10 * want)
    throw internal_error("gauss_sum: |tau| != sqrt(q) beyond tolerance");
  return tau;
}

cplx root_number(const DirichletCharacter& chi) {
  cplx tau = gauss_sum(chi);
  cplx denom = std::sqrt((double)chi.modulus());
  if (chi.parity() == 1) denom *= cplx(0, 1);
  return tau / denom;
}

}  // namespace lfam::chars
