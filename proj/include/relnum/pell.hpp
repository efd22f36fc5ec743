#pragma once

#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "exact.hpp"

namespace relnum {

// Element u + v*sqrt(d) of Z[sqrt(d)], d a positive non-square.
struct QuadIntElem {
  BigInt u, v, d;

  QuadIntElem operator*(const QuadIntElem& o) const {
    if (d != o.d) throw std::invalid_argument("radicand mismatch");
    return QuadIntElem{u * o.u + d * v * o.v, u * o.v + v * o.u, d};
  }

  // Norm u^2 - d v^2; multiplicative.
  BigInt norm() const { return u * u - d * v * v; }
};

inline void require_pell_radicand(const BigInt& d) {
  if (d < 2) throw std::domain_error("radicand must be >= 2");
  if (is_perfect_square(d)) throw std::domain_error("radicand must not be a perfect square");
}

// Minimal (u, v), u, v > 0, with u^2 - d v^2 = 1, via the continued-fraction
// expansion of sqrt(d); the convergents hit the fundamental unit within one
// or two periods.
inline std::pair<BigInt, BigInt> pell_fundamental(const BigInt& d) {
  require_pell_radicand(d);
  const BigInt a0 = isqrt(d);
  BigInt m = 0, den = 1, a = a0;
  BigInt p_prev = 1, p = a0, q_prev = 0, q = 1;
  while (p * p - d * q * q != 1) {
    m = den * a - m;
    den = (d - m * m) / den;
    a = (a0 + m) / den;
    const BigInt p_next = a * p + p_prev, q_next = a * q + q_prev;
    p_prev = p;
    p = p_next;
    q_prev = q;
    q = q_next;
  }
  return {p, q};
}

// Norm-c solution family with fixed residues mod d. The fundamental unit's
// image in the finite ring Z[sqrt(d)]/(d) has some order t; multiplying the
// base solution by (unit^t)^k keeps both coordinates' residues while giving
// infinitely many distinct solutions.
struct PellFamily {
  BigInt d, c;
  std::pair<BigInt, BigInt> base;
  std::pair<BigInt, BigInt> unit;
  BigInt unit_order_t;
};

namespace detail {

// Order of the unit's image in Z[sqrt(d)]/(d); the ring has d^2 elements, so
// the order is at most d^2.
inline BigInt residue_unit_order(const QuadIntElem& unit) {
  const BigInt& d = unit.d;
  auto reduce = [&d](BigInt x) {
    x %= d;
    if (x < 0) x += d;
    return x;
  };
  const BigInt ur = reduce(unit.u), vr = reduce(unit.v);
  BigInt cu = ur, cv = vr, t = 1;
  const BigInt bound = d * d;
  while (!(cu == 1 % d && cv == 0)) {
    const BigInt nu = reduce(cu * ur + d * cv * vr), nv = reduce(cu * vr + cv * ur);
    cu = nu;
    cv = nv;
    if (++t > bound) throw std::logic_error("unit order exceeded ring size");
  }
  return t;
}

}  // namespace detail

inline PellFamily pell_family_make(const BigInt& d, const BigInt& c, const BigInt& u0,
                                   const BigInt& v0) {
  require_pell_radicand(d);
  if (u0 * u0 - d * v0 * v0 != c)
    throw std::invalid_argument("base does not solve u^2 - d v^2 = c");
  const auto [u1, v1] = pell_fundamental(d);
  const QuadIntElem unit{u1, v1, d};
  return PellFamily{d, c, {u0, v0}, {u1, v1}, detail::residue_unit_order(unit)};
}

// `count` distinct norm-c solutions congruent to (u0, v0) mod d, as
// base * unit^(t k) for k = 1..count.
inline std::vector<std::pair<BigInt, BigInt>> pell_congruent_family(const BigInt& d,
                                                                    const BigInt& c,
                                                                    const BigInt& u0,
                                                                    const BigInt& v0,
                                                                    long long count) {
  if (count < 1) throw std::domain_error("count must be positive");
  const PellFamily fam = pell_family_make(d, c, u0, v0);
  QuadIntElem step{1, 0, d};
  const QuadIntElem unit{fam.unit.first, fam.unit.second, d};
  for (BigInt i = 0; i < fam.unit_order_t; ++i) step = step * unit;
  std::vector<std::pair<BigInt, BigInt>> out;
  out.reserve(static_cast<size_t>(count));
  QuadIntElem e{u0, v0, d};
  for (long long k = 0; k < count; ++k) {
    e = e * step;
    out.emplace_back(e.u, e.v);
  }
  return out;
}

// Enumerates u with a2 u^2 + a1 u + a0 a perfect square (a1 even), emitting
// (u, v >= 0) pairs, v the root. For non-square a2 > 0 substitute
// U = a2 u + a1/2 to get U^2 - a2 V^2 = (a1^2 - 4 a0 a2)/4 and walk the
// fundamental-unit orbit of both conjugate seeds (U0, ±V0), keeping exactly
// the elements with U ≡ U0 (mod a2) — that congruence alone makes the mapped
// u integral, and it recurs within every unit-order period, so the walk
// always yields enough solutions. Prefix-stable: longer counts extend
// shorter ones.
inline std::vector<std::pair<BigInt, BigInt>> quad_square_enumerate(const BigInt& a2,
                                                                    const BigInt& a1,
                                                                    const BigInt& a0,
                                                                    const BigInt& base_u,
                                                                    long long count) {
  if (count < 1) throw std::domain_error("count must be positive");
  if (a1 % 2 != 0) throw std::domain_error("middle coefficient must be even");
  if (a2 < 0 || (a2 > 0 && is_perfect_square(a2)))
    throw std::domain_error("leading coefficient must be 0 or a positive non-square");
  const BigInt base_val = a2 * base_u * base_u + a1 * base_u + a0;
  const auto z0 = is_perfect_square(base_val);
  if (!z0) throw std::invalid_argument("base value " + base_val.get_str() + " is not a square");

  std::vector<std::pair<BigInt, BigInt>> out;
  out.reserve(static_cast<size_t>(count));
  if (a2 == 0) {
    if (a1 == 0) {  // constant square: every u works
      for (long k = 1; k <= count; ++k) out.emplace_back(base_u + k, *z0);
      return out;
    }
    // v = z0 + a1 k gives u = base_u + 2 z0 k + a1 k^2 directly.
    std::set<BigInt> seen{base_u};
    for (BigInt k = 1; static_cast<long long>(out.size()) < count; ++k) {
      const BigInt u = base_u + 2 * (*z0) * k + a1 * k * k;
      const BigInt v = abs(*z0 + a1 * k);
      if (seen.insert(u).second) out.emplace_back(u, v);
    }
    return out;
  }

  const BigInt half_a1 = a1 / 2;
  const BigInt u0 = a2 * base_u + half_a1;
  const auto [fu, fv] = pell_fundamental(a2);
  const QuadIntElem unit{fu, fv, a2};
  std::vector<QuadIntElem> walkers{QuadIntElem{u0, *z0, a2}};
  if (*z0 != 0) walkers.push_back(QuadIntElem{u0, -*z0, a2});
  std::set<BigInt> seen{base_u};
  // The residue order of the unit bounds the gap between hits on each walker.
  const BigInt max_steps = detail::residue_unit_order(unit) * BigInt(static_cast<long>(count) + 1) + 1;
  for (BigInt j = 1; static_cast<long long>(out.size()) < count; ++j) {
    if (j > max_steps) throw std::logic_error("unit-orbit walk failed to find solutions");
    for (auto& w : walkers) {
      w = w * unit;
      const auto x = exact_quotient(w.u - half_a1, a2);
      if (!x) continue;
      if (static_cast<long long>(out.size()) >= count) break;
      if (seen.insert(*x).second) out.emplace_back(*x, abs(w.v));
    }
  }
  return out;
}

}  // namespace relnum
