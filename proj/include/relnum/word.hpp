#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "exact.hpp"
#include "mat2.hpp"

namespace relnum {

// Words in the two parabolic generators A = [1 1; 0 1] and B_α = [1 0; α 1].
enum class Gen : unsigned char { A, B };

inline char gen_char(Gen g) { return g == Gen::A ? 'A' : 'B'; }

struct Letter {
  Gen gen;
  BigInt exp;  // nonzero in normal form

  bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};

// Alternating normal form: adjacent letters differ in generator, exponents
// nonzero; the empty word is the identity.
using GroupWord = std::vector<Letter>;

inline bool is_normal_form(const GroupWord& w) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i].exp == 0) return false;
    if (i > 0 && w[i].gen == w[i - 1].gen) return false;
  }
  return true;
}

// Closed-form power: A^n = [1 n; 0 1], B_α^n = [1 0; nα 1].
inline Mat2 generator_power(Gen g, const BigInt& e, const BigRational& alpha) {
  if (g == Gen::A) return Mat2{1, BigRational(e), 0, 1};
  return Mat2{1, 0, BigRational(e) * alpha, 1};
}

// Left-to-right product of the letters' parabolic powers.
inline Mat2 word_to_matrix(const GroupWord& w, const BigRational& alpha) {
  Mat2 m = Mat2::identity();
  for (const Letter& l : w) m = m * generator_power(l.gen, l.exp, alpha);
  return m;
}

// Concatenation with boundary merging and cancellation; inputs and output in
// normal form. Cancellations cascade: (A,2)(B,1) ++ (B,-1)(A,-2) = identity.
inline GroupWord word_concat_normalize(const GroupWord& w1, const GroupWord& w2) {
  GroupWord out;
  out.reserve(w1.size() + w2.size());
  auto push = [&out](const Letter& l) {
    if (l.exp == 0) return;
    if (!out.empty() && out.back().gen == l.gen) {
      out.back().exp += l.exp;
      if (out.back().exp == 0) out.pop_back();
      return;
    }
    out.push_back(l);
  };
  for (const Letter& l : w1) push(l);
  for (const Letter& l : w2) push(l);
  if (!is_normal_form(out)) throw std::logic_error("concat produced non-normal word");
  return out;
}

// "A^-22 B^-2 A B^-1 A"; exponent 1 elided; identity prints as "1".
inline std::string format_word(const GroupWord& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const Letter& l : w) {
    if (!s.empty()) s += ' ';
    s += gen_char(l.gen);
    if (l.exp != 1) s += "^" + l.exp.get_str();
  }
  return s;
}

// Parses the format_word syntax; "1" or "" give the identity word.
inline GroupWord parse_word(const std::string& text) {
  GroupWord w;
  size_t i = 0;
  const auto skip_ws = [&] { while (i < text.size() && text[i] == ' ') ++i; };
  skip_ws();
  if (i < text.size() && text[i] == '1' && text.find_first_not_of("1 ", i) == std::string::npos)
    return w;
  while (i < text.size()) {
    Gen g;
    if (text[i] == 'A') g = Gen::A;
    else if (text[i] == 'B') g = Gen::B;
    else throw std::invalid_argument("bad generator in word: '" + text + "'");
    ++i;
    BigInt e = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      const std::string es = text.substr(start, i - start);
      if (es.empty() || mpz_set_str(e.get_mpz_t(), es.c_str(), 10) != 0)
        throw std::invalid_argument("bad exponent in word: '" + text + "'");
    }
    w.push_back(Letter{g, e});
    skip_ws();
  }
  if (!is_normal_form(w)) throw std::invalid_argument("word not in normal form: '" + text + "'");
  return w;
}

}  // namespace relnum
