#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "exact.hpp"
#include "orbit.hpp"
#include "pell.hpp"
#include "word.hpp"

namespace relnum {

// Parameters of the five-block witness shape A^{n5} B^{n4} A^{n3} B^{y} A^{x}.
// The word sends 0 to 1/2 exactly when alpha satisfies a quadratic whose
// coefficients are polynomial in these parameters; r and s are the odd
// combinations that quadratic is written in.
struct FiveParams {
  BigInt x, y, n3, n4, n5;

  BigInt r() const { return 2 * n5 - 1; }
  BigInt s() const { return 2 * n3 + 2 * n5 - 1; }
};

// A non-free rational with its proof and the parameters that produced it.
struct NonFreeSample {
  BigRational alpha;
  Certificate certificate;
  FiveParams params;
};

namespace detail {

// A^{n5} B^{n4} A^{n3} B^{y} A^{x} in alternating normal form: zero exponents
// are elided and the neighbours they expose are merged.
inline GroupWord five_block_word(const FiveParams& fp) {
  const std::pair<Gen, const BigInt&> blocks[] = {
      {Gen::A, fp.n5}, {Gen::B, fp.n4}, {Gen::A, fp.n3}, {Gen::B, fp.y}, {Gen::A, fp.x}};
  GroupWord w;
  for (const auto& [g, e] : blocks)
    if (e != 0) w = word_concat_normalize(w, GroupWord{Letter{g, e}});
  return w;
}

inline NonFreeSample make_sample(const BigRational& alpha, const FiveParams& fp) {
  Certificate cert{alpha, five_block_word(fp), TargetKind::FromZero};
  if (!verify_certificate(cert))
    throw std::logic_error("family produced a certificate that fails verification at alpha = " +
                           format_rational(alpha));
  return NonFreeSample{alpha, std::move(cert), fp};
}

}  // namespace detail

// Discriminant of the alpha-quadratic
//   (n3 n4 r x y) a^2 + (s x y + n4 r x + n3 n4 r) a + (2x + s) = 0;
// alpha± is rational exactly when this is a perfect square.
inline BigInt discriminant(const FiveParams& fp) {
  const BigInt r = fp.r(), s = fp.s(), d = fp.n3 * fp.n4 * r;
  const BigInt mid = s * fp.x * fp.y + fp.n4 * r * fp.x + d;
  return mid * mid - 4 * d * fp.x * fp.y * (2 * fp.x + s);
}

// Both roots of the alpha-quadratic. Roots are exact rationals when the
// discriminant is a perfect square; otherwise only the coefficients and the
// discriminant are reported.
struct AlphaRoots {
  BigInt lead, mid, constant;  // the quadratic's coefficients
  BigInt disc;
  std::optional<std::pair<BigRational, BigRational>> roots;  // (+ branch, - branch)
};

inline AlphaRoots alpha_roots(const FiveParams& fp) {
  if (fp.x == 0 || fp.y == 0 || fp.n3 == 0 || fp.n4 == 0)
    throw std::domain_error("x, y, n3, n4 must all be nonzero");
  const BigInt r = fp.r(), s = fp.s(), d = fp.n3 * fp.n4 * r;
  AlphaRoots out;
  out.lead = d * fp.x * fp.y;
  out.mid = s * fp.x * fp.y + fp.n4 * r * fp.x + d;
  out.constant = 2 * fp.x + s;
  out.disc = out.mid * out.mid - 4 * out.lead * out.constant;
  if (const auto z = is_perfect_square(out.disc))
    out.roots = {make_rational(-out.mid + *z, 2 * out.lead),
                 make_rational(-out.mid - *z, 2 * out.lead)};
  return out;
}

// First explicit sequence converging to 3: alpha = 3(18n-1) / (2(9n-1)) with
// witness B A^{-1} B^{2n} A^{-3(9n-1)}; n = 0 collapses to B A^2 at 3/2.
inline NonFreeSample family_one(const BigInt& n) {
  const BigRational alpha = make_rational(3 * (18 * n - 1), 2 * (9 * n - 1));
  return detail::make_sample(alpha,
                             FiveParams{-3 * (9 * n - 1), 2 * n, BigInt(-1), BigInt(1), BigInt(0)});
}

// Second explicit sequence converging to 3: alpha =
// (162n^2 + 162n + 41) / (3(2n+1)(9n+4)) with witness
// B A^{-1} B^{2n+1} A^{-3(9n+4)(9n+5)}.
inline NonFreeSample family_two(const BigInt& n) {
  const BigRational alpha =
      make_rational(162 * n * n + 162 * n + 41, 3 * (2 * n + 1) * (9 * n + 4));
  return detail::make_sample(
      alpha, FiveParams{-3 * (9 * n + 4) * (9 * n + 5), 2 * n + 1, BigInt(-1), BigInt(1),
                        BigInt(0)});
}

// 9y^2 - 2y + 1 is a positive non-square for every y != 0; that is what keeps
// the x-quadratic below genuinely Pell-like on the branch through 3. Checked,
// not assumed.
inline bool nonsquare_check_toward3(const BigInt& y) {
  if (y == 0) throw std::domain_error("y = 0 gives the square value 1");
  const BigInt v = 9 * y * y - 2 * y + 1;
  return v > 0 && !is_perfect_square(v);
}

// Requiring the alpha-quadratic's discriminant to be a square is itself a
// quadratic condition on x once y is fixed:
//   lead x^2 + mid x + constant, with
//   lead = (sy + n4 r)^2 - 8 n3 n4 r y,  mid = 2 n3 n4 r (n4 r - sy),
//   constant = (n3 n4 r)^2.
struct XQuadratic {
  BigInt lead, mid, constant;
};

inline XQuadratic x_quadratic_coeffs(const BigInt& n3, const BigInt& n4, const BigInt& n5,
                                     const BigInt& y) {
  if (n3 == 0 || n4 == 0) throw std::domain_error("n3 and n4 must be nonzero");
  const FiveParams fp{BigInt(0), y, n3, n4, n5};
  const BigInt r = fp.r(), s = fp.s(), d = n3 * n4 * r;
  const BigInt w = s * y + n4 * r;
  return XQuadratic{w * w - 8 * d * y, 2 * d * (n4 * r - s * y), d * d};
}

// y values whose leading coefficient (sy + n4 r)^2 - 8 n3 n4 r y is a perfect
// square, scanned over [y_lo, y_hi]. Only finitely many exist overall (see
// the divisor enumeration below), so widening the range stabilizes the list.
inline std::vector<BigInt> exceptional_y_scan(const BigInt& n3, const BigInt& n4,
                                              const BigInt& n5, const BigInt& y_lo,
                                              const BigInt& y_hi) {
  if (n3 == 0 || n4 == 0) throw std::domain_error("n3 and n4 must be nonzero");
  std::vector<BigInt> out;
  for (BigInt y = y_lo; y <= y_hi; ++y)
    if (is_perfect_square(x_quadratic_coeffs(n3, n4, n5, y).lead)) out.push_back(y);
  return out;
}

// The complete (finite) exceptional set, independent of any range. Squareness
// of the leading coefficient factors as
//   (W - 4 n3 n4 r - sz)(W - 4 n3 n4 r + sz) = -8 n3 n4^2 r^3,  W = s(sy + n4 r),
// so every exceptional y comes from a divisor pair (u, v) of that nonzero
// constant with u = v (mod 2) and two exact divisions.
inline std::vector<BigInt> exceptional_y_complete(const BigInt& n3, const BigInt& n4,
                                                  const BigInt& n5) {
  if (n3 == 0 || n4 == 0) throw std::domain_error("n3 and n4 must be nonzero");
  const BigInt r = 2 * n5 - 1, s = 2 * n3 + 2 * n5 - 1;
  const BigInt nrr = n3 * n4 * r;
  const BigInt big_n = -8 * n3 * n4 * n4 * r * r * r;
  std::set<BigInt> ys;
  const BigInt bound = abs(big_n);
  for (BigInt u = 1; u * u <= bound; ++u) {
    if (!mpz_divisible_p(big_n.get_mpz_t(), u.get_mpz_t())) continue;
    for (const BigInt& du : {BigInt(u), BigInt(-u), BigInt(big_n / u), BigInt(-big_n / u)}) {
      const BigInt dv = big_n / du;
      if ((du - dv) % 2 != 0) continue;
      const auto w = exact_quotient((du + dv) / 2 + 4 * nrr, s);
      if (!w) continue;
      const auto y = exact_quotient(*w - n4 * r, s);
      if (y) ys.insert(*y);
    }
  }
  return std::vector<BigInt>(ys.begin(), ys.end());
}

// Limit of the emitted alphas as |x| grows, before fixing y: -s / (n3 n4 r).
inline BigRational limit_point(const BigInt& n3, const BigInt& n4, const BigInt& n5) {
  if (n3 == 0 || n4 == 0) throw std::domain_error("n3 and n4 must be nonzero");
  const BigInt r = 2 * n5 - 1, s = 2 * n3 + 2 * n5 - 1;
  return make_rational(-s, n3 * n4 * r);
}

// Exact element u + w*sqrt(D) of a real quadratic field (D >= 0; rational
// when D is square or w = 0).
struct QuadSurd {
  BigRational u, w;
  BigInt D;
};

// Sign of |u1 + w1 sqrt(D)| - |u2 + w2 sqrt(D)|, exact: compare squares,
// whose difference is again an element of the same field.
inline int quad_surd_abs_cmp(const BigRational& u1, const BigRational& w1, const BigRational& u2,
                             const BigRational& w2, const BigInt& D) {
  const BigRational rat = u1 * u1 - u2 * u2 + BigRational(D) * (w1 * w1 - w2 * w2);
  const BigRational irr = 2 * (u1 * w1 - u2 * w2);
  return sign_of_quad_surd(rat, irr, D);
}

// Sign of |a - L| - |b - L| for rationals a, b and a surd L.
inline int abs_distance_cmp(const BigRational& a, const BigRational& b, const QuadSurd& L) {
  return quad_surd_abs_cmp(a - L.u, -L.w, b - L.u, -L.w, L.D);
}

// The two limits (-(sy + n4 r) ± sqrt(lead)) / (2 n3 n4 r y) the per-branch
// alphas converge to as |x| grows along the square values; plus branch first.
inline std::pair<QuadSurd, QuadSurd> branch_limits(const BigInt& n3, const BigInt& n4,
                                                   const BigInt& n5, const BigInt& y) {
  if (y == 0) throw std::domain_error("y must be nonzero");
  const auto xq = x_quadratic_coeffs(n3, n4, n5, y);
  if (xq.lead < 0) throw std::domain_error("no real limit: leading coefficient is negative");
  const BigInt r = 2 * n5 - 1, s = 2 * n3 + 2 * n5 - 1;
  const BigInt denom = 2 * n3 * n4 * r * y;
  const BigRational u = make_rational(-(s * y + n4 * r), denom);
  const BigRational w = make_rational(1, denom);
  return {QuadSurd{u, w, xq.lead}, QuadSurd{u, -w, xq.lead}};
}

// The branch limit the emitted sequence heads for: whichever of the two lies
// nearer the y-free limit point, the plus branch on ties.
inline QuadSurd designated_limit(const BigInt& n3, const BigInt& n4, const BigInt& n5,
                                 const BigInt& y) {
  const auto [plus, minus] = branch_limits(n3, n4, n5, y);
  const BigRational lp = limit_point(n3, n4, n5);
  const int c = quad_surd_abs_cmp(plus.u - lp, plus.w, minus.u - lp, minus.w, plus.D);
  return c <= 0 ? plus : minus;
}

// `count` verified samples along fixed y, one per enumerated x (ordered by
// |x|, so by sharpness), each the root of the alpha-quadratic lying nearer
// the designated branch limit; their distances to that limit shrink as |x|
// grows. Precondition: the x-quadratic's leading coefficient is 0 or a
// positive non-square, so the square values of the discriminant form a
// Pell-like (or arithmetic) family rather than collapsing.
inline std::vector<NonFreeSample> sequence_toward(const BigInt& n3, const BigInt& n4,
                                                  const BigInt& n5, const BigInt& y,
                                                  long long count) {
  if (y == 0) throw std::domain_error("y must be nonzero");
  if (count < 1) throw std::domain_error("count must be positive");
  const auto xq = x_quadratic_coeffs(n3, n4, n5, y);
  if (xq.lead < 0)
    throw std::domain_error("leading coefficient " + xq.lead.get_str() + " is negative");
  if (const auto z = is_perfect_square(xq.lead); z && xq.lead != 0)
    throw std::domain_error("leading coefficient " + xq.lead.get_str() +
                            " is the perfect square " + z->get_str() + "^2");

  auto xs = quad_square_enumerate(xq.lead, xq.mid, xq.constant, BigInt(0), count);
  std::sort(xs.begin(), xs.end(), [](const auto& l, const auto& r) {
    const BigInt al = abs(l.first), ar = abs(r.first);
    return al != ar ? al < ar : l.first < r.first;
  });

  const QuadSurd limit = designated_limit(n3, n4, n5, y);
  std::vector<NonFreeSample> out;
  out.reserve(xs.size());
  for (const auto& [x, z] : xs) {
    const FiveParams fp{x, y, n3, n4, n5};
    const auto ar = alpha_roots(fp);
    const BigRational plus = make_rational(-ar.mid + z, 2 * ar.lead);
    const BigRational minus = make_rational(-ar.mid - z, 2 * ar.lead);
    const int c = abs_distance_cmp(plus, minus, limit);
    const BigRational& first = c <= 0 ? plus : minus;
    const BigRational& second = c <= 0 ? minus : plus;
    try {
      out.push_back(detail::make_sample(first, fp));
    } catch (const std::logic_error&) {
      out.push_back(detail::make_sample(second, fp));
    }
  }
  return out;
}

}  // namespace relnum
