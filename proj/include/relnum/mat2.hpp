#pragma once

#include <stdexcept>
#include <string>

#include "exact.hpp"

namespace relnum {

// Row-major 2x2 matrix over BigRational with determinant 1.
struct Mat2 {
  BigRational a, b, c, d;

  static Mat2 identity() { return Mat2{1, 0, 0, 1}; }

  BigRational det() const { return a * d - b * c; }

  // Unimodular product; the group operations here never leave SL2.
  Mat2 operator*(const Mat2& o) const {
    Mat2 m{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    if (m.det() != 1) throw std::logic_error("product left SL2");
    return m;
  }

  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

inline Mat2 make_unimodular(BigRational a, BigRational b, BigRational c, BigRational d) {
  Mat2 m{std::move(a), std::move(b), std::move(c), std::move(d)};
  if (m.det() != 1) throw std::invalid_argument("determinant must be 1");
  return m;
}

inline std::string format_matrix(const Mat2& m) {
  return "[" + format_rational(m.a) + " " + format_rational(m.b) + "; " + format_rational(m.c) +
         " " + format_rational(m.d) + "]";
}

// Point of Q ∪ {∞}, the space the Moebius action lives on.
struct ProjPoint {
  bool infinite;
  BigRational value;  // meaningful iff !infinite

  static ProjPoint infinity() { return ProjPoint{true, BigRational(0)}; }
  static ProjPoint finite(BigRational v) { return ProjPoint{false, std::move(v)}; }

  bool operator==(const ProjPoint& o) const {
    if (infinite != o.infinite) return false;
    return infinite || value == o.value;
  }
};

inline std::string format_point(const ProjPoint& x) {
  return x.infinite ? "inf" : format_rational(x.value);
}

// [a b; c d] · r = (ar + b)/(cr + d); ∞ ↦ a/c (or ∞ if c = 0); poles ↦ ∞.
inline ProjPoint moebius_apply(const Mat2& g, const ProjPoint& x) {
  if (x.infinite) {
    if (g.c == 0) return ProjPoint::infinity();
    return ProjPoint::finite(g.a / g.c);
  }
  const BigRational den = g.c * x.value + g.d;
  if (den == 0) return ProjPoint::infinity();
  return ProjPoint::finite((g.a * x.value + g.b) / den);
}

}  // namespace relnum
