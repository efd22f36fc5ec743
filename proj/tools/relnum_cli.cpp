// relnum: search for, generate, and verify exact certificates of non-freeness
// of the group generated by [1 1; 0 1] and [1 0; a 1] at rational a.
//
// Exit codes: 0 success/found, 1 usage or parse error, 2 obstructed,
// 3 search exhausted, 4 known free, 5 verification failure.

#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relnum/relnum.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitObstructed = 2;
constexpr int kExitExhausted = 3;
constexpr int kExitKnownFree = 4;
constexpr int kExitVerifyFailed = 5;

struct GlobalOpts {
  std::string store_path;
  std::string config_path;
  bool no_timestamp = false;
  relnum::SearchBudget budget;
};

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

relnum::CertMeta make_meta(const GlobalOpts& g, std::string command) {
  relnum::CertMeta m;
  m.command = std::move(command);
  if (!g.no_timestamp) m.timestamp = now_iso8601();
  return m;
}

void store_certificate(const GlobalOpts& g, const relnum::Certificate& cert,
                       relnum::CertMeta meta) {
  if (g.store_path.empty()) return;
  relnum::CertificateStore store(g.store_path);
  store.append(cert, meta);
}

// Config file: JSON object with any of max_letters, max_abs_exponent,
// max_nodes. Flags given on the command line win over the file.
void apply_config(GlobalOpts& g) {
  if (g.config_path.empty()) return;
  std::ifstream in(g.config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + g.config_path);
  nlohmann::json j;
  in >> j;
  if (j.contains("max_letters")) g.budget.max_letters = j["max_letters"].get<long long>();
  if (j.contains("max_abs_exponent"))
    g.budget.max_abs_exponent = j["max_abs_exponent"].get<long long>();
  if (j.contains("max_nodes")) g.budget.max_nodes = j["max_nodes"].get<long long>();
}

// "lo..hi" with optional signs.
std::pair<long long, long long> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos)
    throw CLI::ValidationError("range", "expected lo..hi, got '" + text + "'");
  try {
    const long long lo = std::stoll(text.substr(0, dots));
    const long long hi = std::stoll(text.substr(dots + 2));
    if (lo > hi) throw CLI::ValidationError("range", "empty range '" + text + "'");
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError("range", "expected lo..hi, got '" + text + "'");
  } catch (const std::out_of_range&) {
    throw CLI::ValidationError("range", "range endpoint out of range in '" + text + "'");
  }
}

int report_outcome(const relnum::OrbitTestOutcome& out, const std::string& alpha_text) {
  using relnum::OutcomeKind;
  switch (out.kind) {
    case OutcomeKind::Found:
      std::cout << "Found: " << alpha_text << " is non-free; certificate "
                << relnum::format_word(out.certificate->word) << " sends "
                << relnum::target_name(out.certificate->target) << " to 1/2 (nodes visited "
                << out.nodes_visited << ")\n";
      return kExitOk;
    case OutcomeKind::Obstructed:
      std::cout << "Obstructed: " << out.reason << "\n";
      return kExitObstructed;
    case OutcomeKind::KnownFree:
      std::cout << "KnownFree: " << out.reason << "\n";
      return kExitKnownFree;
    default:
      std::cout << "Exhausted: no certificate within budget (letters <= "
                << out.budget.max_letters << ", |exp| <= " << out.budget.max_abs_exponent
                << ", nodes <= " << out.budget.max_nodes << "); visited " << out.nodes_visited
                << "\n";
      return kExitExhausted;
  }
}

int cmd_orbit_test(const GlobalOpts& g, const std::string& alpha_text) {
  const relnum::BigRational alpha = relnum::parse_rational(alpha_text);
  const auto out = relnum::orbit_test_search(alpha, g.budget);
  if (out.kind == relnum::OutcomeKind::Found) {
    auto meta = make_meta(g, "orbit-test " + alpha_text);
    meta.budget = g.budget;
    store_certificate(g, *out.certificate, std::move(meta));
  }
  return report_outcome(out, alpha_text);
}

int cmd_verify_file(const std::string& path) {
  relnum::CertificateStore store(path);
  std::ifstream probe(path);
  if (!probe) {
    std::cerr << "verify: cannot open " << path << "\n";
    return kExitUsage;
  }
  std::vector<relnum::StoredCertificate> lines;
  try {
    lines = store.load(false);
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kExitUsage;
  }
  if (lines.empty()) {
    std::cout << "warning: no certificates in " << path << "; vacuously verified\n";
    return kExitOk;
  }
  size_t ok = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (relnum::verify_certificate(lines[i].cert)) {
      ++ok;
    } else {
      std::cout << "line " << i + 1 << ": FAILS at alpha "
                << relnum::format_rational(lines[i].cert.alpha) << ", word "
                << relnum::format_word(lines[i].cert.word) << "\n";
    }
  }
  std::cout << ok << "/" << lines.size() << " certificates verify\n";
  return ok == lines.size() ? kExitOk : kExitVerifyFailed;
}

int cmd_verify_inline(const std::string& alpha_text, const std::string& word_text,
                      const std::string& target_text) {
  relnum::Certificate cert;
  cert.alpha = relnum::parse_rational(alpha_text);
  cert.word = relnum::parse_word(word_text);
  if (target_text != "zero" && target_text != "infinity")
    throw CLI::ValidationError("--target", "must be 'zero' or 'infinity'");
  cert.target =
      target_text == "zero" ? relnum::TargetKind::FromZero : relnum::TargetKind::FromInfinity;
  if (relnum::verify_certificate(cert)) {
    std::cout << "verified: " << relnum::format_word(cert.word) << " sends " << target_text
              << " to 1/2 at alpha = " << alpha_text << "\n";
    return kExitOk;
  }
  std::cout << "FAILS: " << relnum::format_word(cert.word) << " does not send " << target_text
            << " to 1/2 at alpha = " << alpha_text << "\n";
  return kExitVerifyFailed;
}

void emit_sample(const GlobalOpts& g, const relnum::NonFreeSample& s, const std::string& family,
                 const std::string& command) {
  auto meta = make_meta(g, command);
  meta.family = family;
  meta.params = s.params;
  std::cout << relnum::certificate_line(s.certificate, meta) << "\n";
  store_certificate(g, s.certificate, std::move(meta));
}

int cmd_sweep(const GlobalOpts& g, const std::string& num_range, const std::string& den_range,
              const std::string& out_path, unsigned threads) {
  const auto [nlo, nhi] = parse_range(num_range);
  const auto [dlo, dhi] = parse_range(den_range);
  if (dlo < 1) throw CLI::ValidationError("--den", "denominators must be >= 1");
  const auto rows = relnum::batch_sweep(nlo, nhi, dlo, dhi, g.budget, threads);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + out_path);
    out = &file;
  }
  *out << "numerator,denominator,outcome,word-or-reason,nodes-visited\n";
  for (const auto& [alpha, res] : rows) {
    std::string detail;
    switch (res.kind) {
      case relnum::OutcomeKind::Found:
        detail = relnum::format_word(res.certificate->word) + " -> " +
                 relnum::target_name(res.certificate->target);
        break;
      case relnum::OutcomeKind::Exhausted:
        detail = "no certificate within budget";
        break;
      default:
        detail = res.reason;
        break;
    }
    *out << relnum::numerator(alpha).get_str() << "," << relnum::denominator(alpha).get_str()
         << "," << relnum::outcome_name(res.kind) << "," << detail << "," << res.nodes_visited
         << "\n";
  }
  return kExitOk;
}

int cmd_congruence_minus_i(const std::string& q_text) {
  relnum::BigInt q;
  if (mpz_set_str(q.get_mpz_t(), q_text.c_str(), 10) != 0)
    throw CLI::ValidationError("q", "not an integer: " + q_text);
  const auto res = relnum::minus_identity_member(q);
  if (!res.member) {
    std::cout << "not a member: -I lies in the group only for numerator magnitude 1 or 2, got "
              << q_text << "\n";
    return kExitObstructed;
  }
  std::cout << "member; witness " << relnum::format_word(*res.witness)
            << " evaluates to -I at alpha = " << relnum::format_rational(*res.alpha) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{
      "relnum: exact certificates of non-freeness for two-parabolic groups at rational "
      "parameters"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  if (const char* env = std::getenv("RELNUM_STORE")) g.store_path = env;
  if (const char* env = std::getenv("RELNUM_CONFIG")) g.config_path = env;
  app.add_option("--store", g.store_path,
                 "certificate store path (JSONL, append-only; env RELNUM_STORE)");
  app.add_option("--config", g.config_path,
                 "JSON config with budget defaults (env RELNUM_CONFIG)");
  app.add_flag("--no-timestamp", g.no_timestamp,
               "omit timestamps from stored lines (byte-reproducible runs)");
  auto* ml = app.add_option("--max-letters", g.budget.max_letters, "word length cap (blocks)");
  auto* me = app.add_option("--max-exp", g.budget.max_abs_exponent,
                            "cap on enumerated |exponent| (solved end exponents are exempt)");
  auto* mn = app.add_option("--max-nodes", g.budget.max_nodes, "cap on complete words visited");

  std::string alpha_text, word_text, target_text = "zero";
  std::string range_text = "0..0", y_text = "1", file_path, out_path;
  std::string num_range, den_range;
  long long count = 5;
  unsigned threads = 0;
  std::vector<std::string> ints;

  auto* orbit = app.add_subcommand("orbit-test", "search for an orbit-test certificate at alpha");
  orbit->add_option("alpha", alpha_text, "rational parameter, e.g. 41/18")->required();

  auto* verify = app.add_subcommand("verify", "re-verify stored or inline certificates");
  verify->add_option("file", file_path, "certificate JSONL file");
  verify->add_option("--alpha", alpha_text, "inline: rational parameter");
  verify->add_option("--word", word_text, "inline: word, e.g. 'A^-22 B^-2 A B^-1 A'");
  verify->add_option("--target", target_text, "inline: zero | infinity");

  auto* family = app.add_subcommand("family", "explicit non-free families accumulating at 3");
  auto* fam_one = family->add_subcommand("one", "alpha = 3(18n-1)/(2(9n-1))");
  fam_one->add_option("--range", range_text, "n range lo..hi");
  auto* fam_two = family->add_subcommand("two", "alpha = (162n^2+162n+41)/(3(2n+1)(9n+4))");
  fam_two->add_option("--range", range_text, "n range lo..hi");
  auto* fam_toward = family->add_subcommand(
      "toward", "samples along fixed y converging to the branch limit");
  fam_toward->add_option("params", ints, "n3 n4 n5")->expected(3);
  std::string y_opt = "2";
  fam_toward->add_option("--y", y_opt, "fixed y (nonzero)");
  fam_toward->add_option("--count", count, "number of samples");

  auto* pell = app.add_subcommand("pell", "Pell-equation solution machinery");
  auto* pell_fund = pell->add_subcommand("fundamental", "minimal solution of u^2 - d v^2 = 1");
  std::string d_text;
  pell_fund->add_option("d", d_text, "positive non-square")->required();
  auto* pell_family = pell->add_subcommand(
      "family", "norm-c solutions with both coordinates' residues fixed mod d");
  pell_family->add_option("params", ints, "d c u0 v0")->expected(4);
  pell_family->add_option("--count", count, "number of solutions");
  auto* pell_squares = pell->add_subcommand(
      "squares", "u with a2 u^2 + a1 u + a0 a perfect square, walked from a base solution");
  pell_squares->add_option("params", ints, "a2 a1 a0 base_u")->expected(4);
  pell_squares->add_option("--count", count, "number of solutions");

  auto* sweep = app.add_subcommand("sweep", "orbit-test a rectangle of reduced fractions (CSV)");
  sweep->add_option("--num", num_range, "numerator range lo..hi")->required();
  sweep->add_option("--den", den_range, "denominator range lo..hi (>= 1)")->required();
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");
  sweep->add_option("--threads", threads, "worker threads (default: hardware)");

  auto* cong = app.add_subcommand("congruence", "entrywise reduction mod the numerator");
  auto* cong_minus = cong->add_subcommand("minus-i", "is -I in the group at numerator q?");
  cong_minus->add_option("q", alpha_text, "numerator magnitude")->required();
  auto* cong_hollow = cong->add_subcommand("hollow", "is a hollow matrix in the group at q/p?");
  cong_hollow->add_option("params", ints, "q p")->expected(2);
  auto* cong_diag = cong->add_subcommand("diagonal",
                                         "diagonal non-identity witness at alpha = 1/m + 1/n");
  cong_diag->add_option("params", ints, "m n")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 exit codes collapse onto the documented contract: 0 stays 0
    // (help), everything else is a usage error.
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    apply_config(g);
    // Command-line budget flags override the config file.
    if (!ml->empty()) g.budget.max_letters = ml->as<long long>();
    if (!me->empty()) g.budget.max_abs_exponent = me->as<long long>();
    if (!mn->empty()) g.budget.max_nodes = mn->as<long long>();

    if (orbit->parsed()) return cmd_orbit_test(g, alpha_text);

    if (verify->parsed()) {
      if (!file_path.empty()) return cmd_verify_file(file_path);
      if (alpha_text.empty() || word_text.empty()) {
        std::cerr << "verify: need a file argument or --alpha and --word\n";
        return kExitUsage;
      }
      return cmd_verify_inline(alpha_text, word_text, target_text);
    }

    if (family->parsed()) {
      if (fam_one->parsed() || fam_two->parsed()) {
        const bool one = fam_one->parsed();
        const auto [lo, hi] = parse_range(range_text);
        for (long long n = lo; n <= hi; ++n) {
          const auto s = one ? relnum::family_one(relnum::BigInt(static_cast<long>(n)))
                             : relnum::family_two(relnum::BigInt(static_cast<long>(n)));
          emit_sample(g, s, one ? "one" : "two",
                      std::string("family ") + (one ? "one" : "two") + " --range " + range_text);
        }
        return kExitOk;
      }
      if (fam_toward->parsed()) {
        relnum::BigInt n3(ints[0]), n4(ints[1]), n5(ints[2]), y(y_opt);
        const auto seq = relnum::sequence_toward(n3, n4, n5, y, count);
        std::ostringstream cmd;
        cmd << "family toward " << ints[0] << " " << ints[1] << " " << ints[2] << " --y " << y_opt
            << " --count " << count;
        for (const auto& s : seq) emit_sample(g, s, "toward", cmd.str());
        return kExitOk;
      }
      std::cerr << "family: need a subcommand (one | two | toward)\n";
      return kExitUsage;
    }

    if (pell->parsed()) {
      if (pell_fund->parsed()) {
        const auto [u, v] = relnum::pell_fundamental(relnum::BigInt(d_text));
        std::cout << u.get_str() << " " << v.get_str() << "\n";
        return kExitOk;
      }
      if (pell_family->parsed()) {
        relnum::BigInt d(ints[0]), c(ints[1]), u0(ints[2]), v0(ints[3]);
        for (const auto& [u, v] : relnum::pell_congruent_family(d, c, u0, v0, count))
          std::cout << u.get_str() << " " << v.get_str() << "\n";
        return kExitOk;
      }
      if (pell_squares->parsed()) {
        relnum::BigInt a2(ints[0]), a1(ints[1]), a0(ints[2]), base(ints[3]);
        for (const auto& [u, v] : relnum::quad_square_enumerate(a2, a1, a0, base, count))
          std::cout << u.get_str() << " " << v.get_str() << "\n";
        return kExitOk;
      }
      std::cerr << "pell: need a subcommand (fundamental | family | squares)\n";
      return kExitUsage;
    }

    if (sweep->parsed()) return cmd_sweep(g, num_range, den_range, out_path, threads);

    if (cong->parsed()) {
      if (cong_minus->parsed()) return cmd_congruence_minus_i(alpha_text);
      if (cong_hollow->parsed()) {
        relnum::BigInt q(ints[0]), p(ints[1]);
        const auto res = relnum::hollow_member(q, p);
        if (!res.member) {
          std::cout << "not a member: hollow matrices require numerator magnitude 1, got "
                    << q.get_str() << "\n";
          return kExitObstructed;
        }
        std::cout << "member; witness " << relnum::format_matrix(*res.witness) << "\n";
        return kExitOk;
      }
      if (cong_diag->parsed()) {
        relnum::BigInt m(ints[0]), n(ints[1]);
        const auto w = relnum::diagonal_witness(m, n);
        std::cout << "diagonal witness at alpha = " << relnum::format_rational(w.alpha) << ": "
                  << relnum::format_word(w.word) << " (a1 = " << w.a1.get_str()
                  << ", a3 = " << w.a3.get_str() << ")\n";
        return kExitOk;
      }
      std::cerr << "congruence: need a subcommand (minus-i | hollow | diagonal)\n";
      return kExitUsage;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
