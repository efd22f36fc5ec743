#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "exact.hpp"
#include "mat2.hpp"
#include "word.hpp"

namespace relnum {

// Image of a group matrix under entrywise reduction mod q. Entries of group
// elements at alpha = q/p lie in Z[1/p], and p (hence any power) is a unit
// mod q, so the reduction lands in SL2(Z/qZ).
struct ResidueMat2 {
  BigInt a, b, c, d;
  BigInt q;  // modulus >= 1; entries normalized to [0, q)

  bool operator==(const ResidueMat2& o) const {
    return q == o.q && a == o.a && b == o.b && c == o.c && d == o.d;
  }

  ResidueMat2 operator*(const ResidueMat2& o) const {
    if (q != o.q) throw std::invalid_argument("modulus mismatch");
    auto m = [this](const BigInt& x) { return BigInt(x % q); };
    return ResidueMat2{m(a * o.a + b * o.c), m(a * o.b + b * o.d), m(c * o.a + d * o.c),
                       m(c * o.b + d * o.d), q};
  }

  bool is_identity() const { return a == 1 % q && d == 1 % q && b == 0 && c == 0; }
};

namespace detail {

// x = num/den with den | p^inf maps to num * den^{-1} mod q.
inline BigInt reduce_entry(const BigRational& x, const BigInt& p, const BigInt& q) {
  BigInt rest = denominator(x);
  while (rest != 1) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    if (g == 1)
      throw std::domain_error("entry denominator " + denominator(x).get_str() +
                              " has a prime factor outside " + p.get_str());
    rest /= g;
  }
  BigInt inv;
  if (mpz_invert(inv.get_mpz_t(), denominator(x).get_mpz_t(), q.get_mpz_t()) == 0)
    throw std::domain_error("denominator not invertible mod " + q.get_str());
  BigInt r = numerator(x) * inv % q;
  if (r < 0) r += q;
  return r;
}

}  // namespace detail

// The reduction homomorphism. p need not be prime: Z[1/p]/qZ[1/p] = Z/qZ
// holds whenever gcd(p, q) = 1.
inline ResidueMat2 reduce_mod(const Mat2& g, const BigInt& p, const BigInt& q) {
  if (p < 1 || q < 1) throw std::domain_error("need p >= 1 and q >= 1");
  BigInt gg;
  mpz_gcd(gg.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  if (gg != 1) throw std::domain_error("gcd(p, q) must be 1");
  ResidueMat2 r{detail::reduce_entry(g.a, p, q), detail::reduce_entry(g.b, p, q),
                detail::reduce_entry(g.c, p, q), detail::reduce_entry(g.d, p, q), q};
  BigInt det = (r.a * r.d - r.b * r.c) % q;
  if (det < 0) det += q;
  if (det != 1 % q) throw std::logic_error("reduction left SL2(Z/qZ)");
  return r;
}

// Self-test hook: reduction commutes with the group product.
inline bool homomorphism_property_check(const GroupWord& w1, const GroupWord& w2,
                                        const BigRational& alpha) {
  const BigInt q = abs(numerator(alpha));
  const BigInt p = denominator(alpha);
  if (q == 0) throw std::domain_error("alpha must have nonzero numerator");
  const Mat2 m1 = word_to_matrix(w1, alpha), m2 = word_to_matrix(w2, alpha);
  const Mat2 prod = word_to_matrix(word_concat_normalize(w1, w2), alpha);
  return reduce_mod(prod, p, q) == reduce_mod(m1, p, q) * reduce_mod(m2, p, q);
}

// -I lies in the group iff the numerator magnitude is 1 or 2; both membership
// witnesses are powers of B A^{-1}: ((B,1)(A,-1))^2 = -I at alpha = 2 and
// ((B,1)(A,-1))^3 = -I at alpha = 1.
struct MinusIdentityResult {
  bool member;
  std::optional<GroupWord> witness;
  std::optional<BigRational> alpha;
};

inline MinusIdentityResult minus_identity_member(const BigInt& q) {
  if (q < 1) throw std::domain_error("q must be a positive integer");
  if (q != 1 && q != 2) return {false, std::nullopt, std::nullopt};
  const int copies = q == 2 ? 2 : 3;
  GroupWord w;
  for (int i = 0; i < copies; ++i) {
    w.push_back(Letter{Gen::B, 1});
    w.push_back(Letter{Gen::A, -1});
  }
  const BigRational alpha = make_rational(q);
  const Mat2 m = word_to_matrix(w, alpha);
  if (!(m.a == -1 && m.b == 0 && m.c == 0 && m.d == -1))
    throw std::logic_error("minus-identity witness failed exact evaluation");
  return {true, std::move(w), alpha};
}

// A hollow matrix (both diagonal entries zero) lies in the group iff q = 1;
// the membership witness is the matrix [0 -p; 1/p 0]. No word for it is
// known, so the witness is returned as a matrix only.
struct HollowResult {
  bool member;
  std::optional<Mat2> witness;
};

inline HollowResult hollow_member(const BigInt& q, const BigInt& p) {
  if (q < 1 || p < 1) throw std::domain_error("q and p must be positive integers");
  if (q != 1) return {false, std::nullopt};
  return {true, make_unimodular(BigRational(0), BigRational(-p), make_rational(1, p),
                                BigRational(0))};
}

// Non-identity diagonal element of the group at alpha = 1/m + 1/n: the word
// A^{a1} B^{-m} A B^{-n} A^{a3} is diagonal exactly when
// m^2 a1 + n^2 a3 = m n. The equation is always solvable over Z because
// gcd(m^2, n^2) = gcd(m, n)^2 divides mn; the check stays explicit anyway,
// and zero components are repaired by shifting along the homogeneous line.
struct DiagonalWitness {
  BigInt m, n, a1, a3;
  GroupWord word;
  BigRational alpha;
};

inline DiagonalWitness diagonal_witness(const BigInt& m, const BigInt& n) {
  if (m < 1 || n < 1) throw std::domain_error("m and n must be positive integers");
  const BigInt m2 = m * m, n2 = n * n, mn = m * n;
  BigInt g2, u, v;
  mpz_gcdext(g2.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), m2.get_mpz_t(), n2.get_mpz_t());
  if (!mpz_divisible_p(mn.get_mpz_t(), g2.get_mpz_t()))
    throw std::domain_error("m^2 x + n^2 y = mn is not solvable over Z");
  const BigInt scale = mn / g2;
  const BigInt base1 = u * scale, base3 = v * scale;
  const BigInt h1 = n2 / g2, h3 = m2 / g2;  // homogeneous direction (+h1, -h3)
  BigInt a1, a3;
  for (BigInt k = 0;; k = k > 0 ? BigInt(-k) : BigInt(1 - k)) {  // 0, 1, -1, 2, -2, ...
    a1 = base1 + k * h1;
    a3 = base3 - k * h3;
    if (a1 != 0 && a3 != 0) break;
  }
  const BigRational alpha = make_rational(m + n, mn);
  const GroupWord w{Letter{Gen::A, a1}, Letter{Gen::B, -m}, Letter{Gen::A, 1},
                    Letter{Gen::B, -n}, Letter{Gen::A, a3}};
  const Mat2 mat = word_to_matrix(w, alpha);
  if (!(mat.b == 0 && mat.c == 0 && mat.a * mat.d == 1 && mat.a != 1))
    throw std::logic_error("diagonal witness failed exact evaluation");
  return {m, n, a1, a3, w, alpha};
}

}  // namespace relnum
