// Prints the two explicit families of non-free rationals accumulating at 3,
// then the fixed-y sequence converging to its branch limit (7 + sqrt 33)/4.
// All arithmetic is exact; doubles appear only for display.

#include <cmath>
#include <cstdio>

#include "relnum/relnum.hpp"

int main() {
  using namespace relnum;

  std::printf("family one: alpha = 3(18n-1) / (2(9n-1))\n");
  for (long n = -5; n <= 5; ++n) {
    const auto s = family_one(BigInt(n));
    const BigRational gap = s.alpha - 3;
    std::printf("  n = %3ld  alpha = %-10s  |alpha - 3| = %.3e  word %s\n", n,
                format_rational(s.alpha).c_str(), std::fabs(mpq_get_d(gap.get_mpq_t())),
                format_word(s.certificate.word).c_str());
  }

  std::printf("\nfamily two: alpha = (162n^2 + 162n + 41) / (3(2n+1)(9n+4))\n");
  for (long n = -5; n <= 5; ++n) {
    const auto s = family_two(BigInt(n));
    const BigRational gap = s.alpha - 3;
    std::printf("  n = %3ld  alpha = %-10s  |alpha - 3| = %.3e\n", n,
                format_rational(s.alpha).c_str(), std::fabs(mpq_get_d(gap.get_mpq_t())));
  }

  const BigInt n3(-1), n4(1), n5(0), y(2);
  const QuadSurd limit = designated_limit(n3, n4, n5, y);
  const double lim =
      mpq_get_d(limit.u.get_mpq_t()) + mpq_get_d(limit.w.get_mpq_t()) * std::sqrt(33.0);
  std::printf("\nfixed y = 2 sequence; branch limit (7 + sqrt 33)/4 = %.12f\n", lim);
  for (const auto& s : sequence_toward(n3, n4, n5, y, 5)) {
    std::printf("  x = %-11s alpha = %-14s |alpha - limit| = %.3e  word %s\n",
                s.params.x.get_str().c_str(), format_rational(s.alpha).c_str(),
                std::fabs(mpq_get_d(s.alpha.get_mpq_t()) - lim),
                format_word(s.certificate.word).c_str());
  }
  return 0;
}
