#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace relnum {

// Arbitrary-precision integers and rationals. BigRational is kept canonical
// (gcd(|num|, den) = 1, den >= 1) by routing every construction through
// make_rational / parse_rational; gmpxx arithmetic preserves canonical form.
using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

inline BigRational make_rational(const BigInt& num) { return BigRational(num); }

inline BigInt numerator(const BigRational& r) { return r.get_num(); }
inline BigInt denominator(const BigRational& r) { return r.get_den(); }

namespace detail {

// Strict integer shape; mpz_set_str alone would silently skip whitespace.
inline bool looks_like_integer(const std::string& s) {
  size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace detail

// Accepts "q", "q/p", with optional leading sign on either part.
inline BigRational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  const std::string ns = slash == std::string::npos ? text : text.substr(0, slash);
  const std::string ds = slash == std::string::npos ? "1" : text.substr(slash + 1);
  BigInt num, den;
  if (!detail::looks_like_integer(ns) || !detail::looks_like_integer(ds) ||
      mpz_set_str(num.get_mpz_t(), ns.c_str(), 10) != 0 ||
      mpz_set_str(den.get_mpz_t(), ds.c_str(), 10) != 0)
    throw std::invalid_argument("malformed fraction: '" + text + "'");
  return make_rational(num, den);
}

// Always "num/den" (canonical), so round-trips are byte-stable.
inline std::string format_rational(const BigRational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline BigInt isqrt(const BigInt& n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  return root;
}

// Exact square root when n is a perfect square >= 0, empty otherwise.
inline std::optional<BigInt> is_perfect_square(const BigInt& n) {
  if (n < 0) return std::nullopt;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  return isqrt(n);
}

// Exact quotient n/d when d != 0 and d | n, empty otherwise.
inline std::optional<BigInt> exact_quotient(const BigInt& n, const BigInt& d) {
  if (d == 0) return std::nullopt;
  if (!mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) return std::nullopt;
  BigInt x;
  mpz_divexact(x.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return x;
}

// Sign of u + w*sqrt(D) for D > 0, exact. Used for comparisons in Q(sqrt(D)).
inline int sign_of_quad_surd(const BigRational& u, const BigRational& w, const BigInt& D) {
  if (D < 0) throw std::domain_error("negative radicand");
  const int su = sgn(u), sw = sgn(w);
  if (sw == 0 || D == 0) return su;
  if (su == 0) return sw;
  if (su == sw) return su;
  // Opposite signs: compare u^2 against D*w^2; the larger magnitude wins.
  const BigRational uu = u * u;
  const BigRational ww = w * w * BigRational(D);
  const int c = cmp(uu, ww);
  if (c == 0) return 0;
  return (c > 0) ? su : sw;
}

}  // namespace relnum
