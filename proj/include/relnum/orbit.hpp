#pragma once

#include <atomic>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "exact.hpp"
#include "mat2.hpp"
#include "word.hpp"

namespace relnum {

// Which orbit-test equation a certificate witnesses: g·0 = 1/2 or g·∞ = 1/2.
enum class TargetKind : unsigned char { FromZero, FromInfinity };

inline std::string target_name(TargetKind t) {
  return t == TargetKind::FromZero ? "zero" : "infinity";
}

// The persisted proof object: evaluating `word` at `alpha` maps the start
// point (0 or ∞) to 1/2, which certifies that alpha is non-free.
struct Certificate {
  BigRational alpha;
  GroupWord word;
  TargetKind target;
};

struct SearchBudget {
  long long max_letters = 6;        // alternating blocks per word
  long long max_abs_exponent = 64;  // cap on *enumerated* exponents (solved end exponents are determined, not searched)
  long long max_nodes = 1'000'000;  // complete words visited
};

enum class OutcomeKind : unsigned char { Found, Obstructed, Exhausted, KnownFree };

inline std::string outcome_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Found: return "found";
    case OutcomeKind::Obstructed: return "obstructed";
    case OutcomeKind::Exhausted: return "exhausted";
    default: return "known-free";
  }
}

struct OrbitTestOutcome {
  OutcomeKind kind;
  std::optional<Certificate> certificate;  // set iff kind == Found (always verified)
  std::string reason;                      // set for Obstructed / KnownFree
  SearchBudget budget;
  unsigned long long nodes_visited = 0;
};

inline bool verify_certificate(const Certificate& cert) {
  if (!is_normal_form(cert.word)) return false;
  const Mat2 g = word_to_matrix(cert.word, cert.alpha);
  const ProjPoint start = cert.target == TargetKind::FromZero
                              ? ProjPoint::finite(BigRational(0))
                              : ProjPoint::infinity();
  return moebius_apply(g, start) == ProjPoint::finite(BigRational(1, 2));
}

struct ObstructionReport {
  OutcomeKind kind;  // Obstructed or KnownFree
  std::string reason;
};

// Pre-filters that make a search pointless: |alpha| >= 4 generates a free
// group, and an even numerator other than ±2 can never pass the orbit test.
inline std::optional<ObstructionReport> obstruction_check(const BigRational& alpha) {
  if (abs(alpha) >= 4)
    return ObstructionReport{OutcomeKind::KnownFree,
                             "|alpha| >= 4 so the two parabolics generate a free group"};
  const BigInt q = abs(numerator(alpha));
  if (q % 2 == 0 && q != 2)
    return ObstructionReport{
        OutcomeKind::Obstructed,
        "numerator magnitude " + q.get_str() +
            " is even and differs from 2; the orbit of {0/1} never reaches halves"};
  return std::nullopt;
}

namespace detail {

// Matrix scaled by p^(#B-letters): A^e = [1 e; 0 1], B^e ~ [p 0; eq p].
// Both target conditions (2b = d, 2a = c) are invariant under the scaling.
struct SMat {
  BigInt a, b, c, d;
};

inline SMat smat_mul_a(const SMat& m, long e) {
  return SMat{m.a, m.a * e + m.b, m.c, m.c * e + m.d};
}

inline SMat smat_mul_b(const SMat& m, long e, const BigInt& q, const BigInt& p) {
  const BigInt eq = BigInt(e) * q;
  return SMat{m.a * p + m.b * eq, m.b * p, m.c * p + m.d * eq, m.d * p};
}

// Bounded best-first enumeration of alternating words, cheapest totals first:
// outer order is (sum of |exponents|, letter count, lexicographic), the lex
// tie-break being A-start before B-start, then per position magnitude
// ascending with +m before -m. At every complete word the engine also solves
// exactly for a single prepended or appended generator power hitting either
// target — the condition is linear in any one end exponent — so certificates
// whose words carry one large exponent are reached from tiny enumerated
// cores. Deterministic and single-threaded by construction.
class Searcher {
 public:
  Searcher(const BigRational& alpha, const SearchBudget& budget)
      : alpha_(alpha), q_(numerator(alpha)), p_(denominator(alpha)), budget_(budget) {
    if (budget.max_letters < 1 || budget.max_abs_exponent < 1 || budget.max_nodes < 1)
      throw std::invalid_argument("search budget fields must all be >= 1");
  }

  OrbitTestOutcome run() {
    const long long maxL = budget_.max_letters, e = budget_.max_abs_exponent;
    for (long long s = 1; s <= maxL * e && !stop_; ++s) {
      const long long lmin = (s + e - 1) / e;
      for (long long l = lmin; l <= std::min(maxL, s) && !stop_; ++l) {
        for (Gen start : {Gen::A, Gen::B}) {
          if (stop_) break;
          letters_.clear();
          dfs(l, s, start, SMat{1, 0, 0, 1});
        }
      }
    }
    OrbitTestOutcome out;
    out.budget = budget_;
    out.nodes_visited = nodes_;
    if (found_) {
      out.kind = OutcomeKind::Found;
      out.certificate = std::move(found_);
    } else {
      out.kind = OutcomeKind::Exhausted;
    }
    return out;
  }

 private:
  void dfs(long long l, long long srem, Gen gen, const SMat& m) {
    const long long remaining = l - static_cast<long long>(letters_.size()) - 1;
    const long long e = budget_.max_abs_exponent;
    const long long lo = std::max(1LL, srem - remaining * e);
    const long long hi = std::min(e, srem - remaining);
    const Gen next = gen == Gen::A ? Gen::B : Gen::A;
    for (long long mag = lo; mag <= hi && !stop_; ++mag) {
      for (int sign = 0; sign < 2 && !stop_; ++sign) {
        const long exp = static_cast<long>(sign == 0 ? mag : -mag);
        const SMat mm = gen == Gen::A ? smat_mul_a(m, exp) : smat_mul_b(m, exp, q_, p_);
        letters_.push_back(Letter{gen, BigInt(exp)});
        if (remaining == 0)
          leaf(mm);
        else
          dfs(l, srem - mag, next, mm);
        letters_.pop_back();
      }
    }
  }

  void leaf(const SMat& m) {
    if (nodes_ >= static_cast<unsigned long long>(budget_.max_nodes)) {
      stop_ = true;
      return;
    }
    ++nodes_;
    if (2 * m.b == m.d && emit(letters_, TargetKind::FromZero)) return;
    if (2 * m.a == m.c && emit(letters_, TargetKind::FromInfinity)) return;
    if (static_cast<long long>(letters_.size()) + 1 > budget_.max_letters) return;

    // One-letter completions: each target condition is linear in the exponent
    // of a single power glued to either end, so solve it exactly.
    const Gen first = letters_.front().gen, last = letters_.back().gen;
    if (first == Gen::B) {  // prepend A^x
      if (try_extend(exact_quotient(m.d - 2 * m.b, 2 * m.d), Gen::A, true, TargetKind::FromZero))
        return;
      if (try_extend(exact_quotient(m.c - 2 * m.a, 2 * m.c), Gen::A, true,
                     TargetKind::FromInfinity))
        return;
    } else if (q_ != 0) {  // prepend B^x
      if (try_extend(exact_quotient(p_ * (2 * m.b - m.d), q_ * m.b), Gen::B, true,
                     TargetKind::FromZero))
        return;
      if (try_extend(exact_quotient(p_ * (2 * m.a - m.c), q_ * m.a), Gen::B, true,
                     TargetKind::FromInfinity))
        return;
    }
    if (last == Gen::B) {  // append A^x; only the zero target depends on it
      if (try_extend(exact_quotient(m.d - 2 * m.b, 2 * m.a - m.c), Gen::A, false,
                     TargetKind::FromZero))
        return;
    } else if (q_ != 0) {  // append B^x; only the infinity target depends on it
      if (try_extend(exact_quotient(p_ * (m.c - 2 * m.a), q_ * (2 * m.b - m.d)), Gen::B, false,
                     TargetKind::FromInfinity))
        return;
    }
  }

  bool try_extend(std::optional<BigInt> x, Gen g, bool front, TargetKind target) {
    if (!x || *x == 0) return false;
    GroupWord w;
    w.reserve(letters_.size() + 1);
    if (front) w.push_back(Letter{g, *x});
    w.insert(w.end(), letters_.begin(), letters_.end());
    if (!front) w.push_back(Letter{g, *x});
    return emit(w, target);
  }

  bool emit(const GroupWord& w, TargetKind target) {
    Certificate cert{alpha_, w, target};
    if (!verify_certificate(cert))
      throw std::logic_error("search emitted a certificate that fails verification");
    found_ = std::move(cert);
    stop_ = true;
    return true;
  }

  BigRational alpha_;
  BigInt q_, p_;
  SearchBudget budget_;
  GroupWord letters_;
  unsigned long long nodes_ = 0;
  bool stop_ = false;
  std::optional<Certificate> found_;
};

}  // namespace detail

// Raw bounded search with no pre-filters; returns Found or Exhausted.
// Exposed so the obstruction theorems can be tested against brute force.
inline OrbitTestOutcome search_certificate(const BigRational& alpha, const SearchBudget& budget) {
  return detail::Searcher(alpha, budget).run();
}

// The orbit test: pre-filters first, then the bounded deterministic search.
inline OrbitTestOutcome orbit_test_search(const BigRational& alpha, const SearchBudget& budget) {
  if (auto gate = obstruction_check(alpha)) {
    OrbitTestOutcome out;
    out.kind = gate->kind;
    out.reason = gate->reason;
    out.budget = budget;
    return out;
  }
  return search_certificate(alpha, budget);
}

// One outcome per reduced fraction q/p in the rectangle; non-reduced pairs
// are skipped. Items are independent; rows come back in input order no
// matter how many workers ran.
inline std::vector<std::pair<BigRational, OrbitTestOutcome>> batch_sweep(
    long long num_lo, long long num_hi, long long den_lo, long long den_hi,
    const SearchBudget& budget, unsigned threads = 0) {
  std::vector<BigRational> tasks;
  for (long long p = std::max(1LL, den_lo); p <= den_hi; ++p)
    for (long long q = num_lo; q <= num_hi; ++q) {
      const BigInt bq(static_cast<long>(q)), bp(static_cast<long>(p));
      BigInt g;
      mpz_gcd(g.get_mpz_t(), bq.get_mpz_t(), bp.get_mpz_t());
      if (g == 1) tasks.push_back(make_rational(bq, bp));
    }
  std::vector<std::pair<BigRational, OrbitTestOutcome>> rows(tasks.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<size_t>(tasks.size(), 1));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
      rows[i] = {tasks[i], orbit_test_search(tasks[i], budget)};
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace relnum
