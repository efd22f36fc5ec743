#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "relnum/certificate_io.hpp"

using namespace relnum;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "relnum_io_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int code;
  std::string out;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path capture = scratch() / ("run_" + std::to_string(counter++) + ".txt");
  std::string cmd = env_prefix.empty() ? "" : env_prefix + " ";
  cmd += std::string(RELNUM_CLI_BIN) + " " + args + " > " + capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  return RunResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

Certificate sample_cert() {
  return Certificate{parse_rational("3/2"), parse_word("B^2 A^-1"), TargetKind::FromZero};
}

}  // namespace

TEST_CASE("certificate serialization is byte-stable") {
  REQUIRE(certificate_line(sample_cert()) ==
          R"({"alpha":"3/2","word":[["B","2"],["A","-1"]],"target":"zero"})");

  CertMeta meta;
  meta.command = "orbit-test 3/2";
  meta.budget = SearchBudget{2, 3, 10000};
  meta.family = "one";
  meta.params = FiveParams{BigInt(-24), BigInt(2), BigInt(-1), BigInt(1), BigInt(0)};
  meta.timestamp = "2026-01-01T00:00:00Z";
  REQUIRE(certificate_line(sample_cert(), meta) ==
          R"({"alpha":"3/2","word":[["B","2"],["A","-1"]],"target":"zero",)"
          R"("meta":{"command":"orbit-test 3/2",)"
          R"("budget":{"max_letters":2,"max_abs_exponent":3,"max_nodes":10000},)"
          R"("family":"one",)"
          R"("params":{"x":"-24","y":"2","n3":"-1","n4":"1","n5":"0"},)"
          R"("timestamp":"2026-01-01T00:00:00Z"}})");
}

TEST_CASE("certificate lines round-trip") {
  CertMeta meta;
  meta.command = "orbit-test 3/2";
  meta.budget = SearchBudget{6, 64, 1000000};
  const std::string line = certificate_line(sample_cert(), meta);
  const StoredCertificate back = parse_certificate_line(line);
  REQUIRE(back.cert.alpha == parse_rational("3/2"));
  REQUIRE(back.cert.word == parse_word("B^2 A^-1"));
  REQUIRE(back.cert.target == TargetKind::FromZero);
  REQUIRE(back.meta.at("command") == "orbit-test 3/2");
  REQUIRE(back.meta.at("budget").at("max_nodes") == 1000000);
  // and serializing the parsed certificate with the same meta reproduces the line
  CertMeta again;
  again.command = "orbit-test 3/2";
  again.budget = SearchBudget{6, 64, 1000000};
  REQUIRE(certificate_line(back.cert, again) == line);
}

TEST_CASE("certificate parsing rejects malformed lines") {
  REQUIRE_THROWS(parse_certificate_line("{"));
  REQUIRE_THROWS_WITH(parse_certificate_line(R"(["not","an","object"])"),
                      Catch::Matchers::ContainsSubstring("alpha"));
  REQUIRE_THROWS_WITH(parse_certificate_line(R"({"alpha":"3/2","word":[["C","1"]],"target":"zero"})"),
                      Catch::Matchers::ContainsSubstring("unknown generator"));
  REQUIRE_THROWS_WITH(parse_certificate_line(R"({"alpha":"3/2","word":[["A","x"]],"target":"zero"})"),
                      Catch::Matchers::ContainsSubstring("bad exponent"));
  REQUIRE_THROWS_WITH(parse_certificate_line(R"({"alpha":"3/2","word":[["A","0"]],"target":"zero"})"),
                      Catch::Matchers::ContainsSubstring("normal form"));
  REQUIRE_THROWS_WITH(
      parse_certificate_line(R"({"alpha":"3/2","word":[["A","1"],["A","2"]],"target":"zero"})"),
      Catch::Matchers::ContainsSubstring("normal form"));
  REQUIRE_THROWS_WITH(parse_certificate_line(R"({"alpha":"3/2","word":[],"target":"half"})"),
                      Catch::Matchers::ContainsSubstring("unknown target"));
  REQUIRE_THROWS_WITH(parse_certificate_line(R"({"alpha":"3/0","word":[],"target":"zero"})"),
                      Catch::Matchers::ContainsSubstring("zero"));
}

TEST_CASE("certificate store appends and deduplicates") {
  const fs::path path = scratch() / "store_basic.jsonl";
  CertificateStore store(path);
  REQUIRE(store.append(sample_cert()));
  REQUIRE_FALSE(store.append(sample_cert()));  // exact duplicate
  const Certificate other{parse_rational("41/18"), parse_word("A^-22 B^-2 A B^-1 A"),
                          TargetKind::FromZero};
  REQUIRE(store.append(other));
  REQUIRE(store.load(false).size() == 2);
  REQUIRE(store.load(true).size() == 2);  // both survive exact re-verification

  // a fresh handle on the same file sees the existing keys
  CertificateStore reopened(path);
  REQUIRE_FALSE(reopened.append(other));
  REQUIRE(store.load(false).size() == 2);
}

TEST_CASE("store load reports the offending line") {
  const fs::path path = scratch() / "store_bad.jsonl";
  {
    CertificateStore store(path);
    REQUIRE(store.append(sample_cert()));
    std::ofstream app(path, std::ios::app);
    app << "this is not json\n";
  }
  CertificateStore store(path);
  REQUIRE_THROWS_WITH(store.load(false), Catch::Matchers::ContainsSubstring(":2:"));

  const fs::path fake = scratch() / "store_unverified.jsonl";
  {
    std::ofstream out(fake);
    out << R"({"alpha":"41/18","word":[["A","1"]],"target":"zero"})" << "\n";
  }
  CertificateStore bad(fake);
  REQUIRE(bad.load(false).size() == 1);  // parses fine
  REQUIRE_THROWS_WITH(bad.load(true), Catch::Matchers::ContainsSubstring("fails verification"));

  CertificateStore missing(scratch() / "never_written.jsonl");
  REQUIRE(missing.load(true).empty());
}

TEST_CASE("cli: orbit-test outcomes and exit codes") {
  const fs::path store = scratch() / "cli_store.jsonl";
  const std::string env = "RELNUM_STORE=" + store.string();

  const auto found = run_cli("orbit-test 41/18 --no-timestamp", env);
  REQUIRE(found.code == 0);
  REQUIRE(contains(found.out, "Found: 41/18"));
  REQUIRE(contains(found.out, "sends zero to 1/2"));

  // the store holds one verifiable line with command and budget metadata
  CertificateStore cs(store);
  auto stored = cs.load(true);
  REQUIRE(stored.size() == 1);
  REQUIRE(stored[0].meta.at("command") == "orbit-test 41/18");
  REQUIRE(stored[0].meta.at("budget").at("max_letters") == 6);
  REQUIRE_FALSE(stored[0].meta.contains("timestamp"));

  // re-running does not duplicate the line
  REQUIRE(run_cli("orbit-test 41/18 --no-timestamp", env).code == 0);
  REQUIRE(CertificateStore(store).load(true).size() == 1);

  const auto obstructed = run_cli("orbit-test 4/5");
  REQUIRE(obstructed.code == 2);
  REQUIRE(contains(obstructed.out, "Obstructed:"));

  const auto known_free = run_cli("orbit-test 9/2");
  REQUIRE(known_free.code == 4);
  REQUIRE(contains(known_free.out, "KnownFree:"));

  const auto exhausted = run_cli("orbit-test 41/18 --max-letters 2 --max-exp 2");
  REQUIRE(exhausted.code == 3);
  REQUIRE(contains(exhausted.out, "Exhausted: no certificate within budget"));
}

TEST_CASE("cli: usage errors exit 1, help exits 0") {
  REQUIRE(run_cli("orbit-test 1.5").code == 1);
  REQUIRE(run_cli("").code == 1);
  REQUIRE(run_cli("no-such-command").code == 1);
  REQUIRE(run_cli("orbit-test").code == 1);          // missing required positional
  REQUIRE(run_cli("pell fundamental 9").code == 1);  // perfect-square radicand
  REQUIRE(run_cli("--help").code == 0);
  REQUIRE(run_cli("verify").code == 1);  // needs file or --alpha/--word
}

TEST_CASE("cli: pell outputs") {
  const auto fund = run_cli("pell fundamental 2");
  REQUIRE(fund.code == 0);
  REQUIRE(fund.out == "3 2\n");

  const auto fam = run_cli("pell family 2 -1 1 1 --count 3");
  REQUIRE(fam.code == 0);
  REQUIRE(fam.out == "7 5\n41 29\n239 169\n");

  const auto sq = run_cli("pell squares 2 0 -1 1 --count 3");
  REQUIRE(sq.code == 0);
  REQUIRE(sq.out == "5 7\n29 41\n169 239\n");
}

TEST_CASE("cli: family generators emit verifiable JSONL deterministically") {
  const auto one = run_cli("family one --range -3..3 --no-timestamp");
  REQUIRE(one.code == 0);
  const auto ls = lines_of(one.out);
  REQUIRE(ls.size() == 7);
  const char* expect[] = {"165/56", "111/38", "57/20", "3/2", "51/16", "105/34", "159/52"};
  for (int i = 0; i < 7; ++i) {
    const StoredCertificate sc = parse_certificate_line(ls[i]);
    REQUIRE(format_rational(sc.cert.alpha) == expect[i]);
    REQUIRE(verify_certificate(sc.cert));
    REQUIRE(sc.meta.at("family") == "one");
    REQUIRE(sc.meta.at("command") == "family one --range -3..3");
  }

  // byte-identical on repeat runs once timestamps are off
  REQUIRE(run_cli("family one --range -3..3 --no-timestamp").out == one.out);

  const auto toward = run_cli("family toward -1 1 0 --y 2 --count 3 --no-timestamp");
  REQUIRE(toward.code == 0);
  const auto ts = lines_of(toward.out);
  REQUIRE(ts.size() == 3);
  const char* texpect[] = {"51/16", "137/43", "6299/1977"};
  const char* xexpect[] = {"-24", "344", "727536"};
  for (int i = 0; i < 3; ++i) {
    const StoredCertificate sc = parse_certificate_line(ts[i]);
    REQUIRE(format_rational(sc.cert.alpha) == texpect[i]);
    REQUIRE(verify_certificate(sc.cert));
    REQUIRE(sc.meta.at("family") == "toward");
    REQUIRE(sc.meta.at("params").at("x") == xexpect[i]);
    REQUIRE(sc.meta.at("params").at("y") == "2");
  }
}

TEST_CASE("cli: sweep produces the CSV contract") {
  const auto res = run_cli("sweep --num 41..43 --den 18..18");
  REQUIRE(res.code == 0);
  const auto ls = lines_of(res.out);
  REQUIRE(ls.size() == 3);  // header + 41/18 + 43/18 (42/18 is not reduced)
  REQUIRE(ls[0] == "numerator,denominator,outcome,word-or-reason,nodes-visited");
  REQUIRE(ls[1].rfind("41,18,found,", 0) == 0);
  REQUIRE(ls[2].rfind("43,18,found,", 0) == 0);
  REQUIRE(contains(ls[1], "-> zero"));

  // --out writes the same rows to a file
  const fs::path csv = scratch() / "sweep.csv";
  REQUIRE(run_cli("sweep --num 41..43 --den 18..18 --out " + csv.string()).code == 0);
  std::ifstream in(csv);
  std::stringstream ss;
  ss << in.rdbuf();
  REQUIRE(lines_of(ss.str()) == ls);

  REQUIRE(run_cli("sweep --num 1..2 --den 0..0").code == 1);  // denominators must be >= 1
}

TEST_CASE("cli: congruence subcommands") {
  const auto member = run_cli("congruence minus-i 2");
  REQUIRE(member.code == 0);
  REQUIRE(contains(member.out, "member; witness B A^-1 B A^-1 evaluates to -I at alpha = 2/1"));

  const auto non = run_cli("congruence minus-i 5");
  REQUIRE(non.code == 2);
  REQUIRE(contains(non.out, "not a member"));

  const auto hollow = run_cli("congruence hollow 1 7");
  REQUIRE(hollow.code == 0);
  REQUIRE(contains(hollow.out, "member; witness [0/1 -7/1; 1/7 0/1]"));
  REQUIRE(run_cli("congruence hollow 3 5").code == 2);

  const auto diag = run_cli("congruence diagonal 2 3");
  REQUIRE(diag.code == 0);
  REQUIRE(contains(diag.out, "diagonal witness at alpha = 5/6"));
}

TEST_CASE("cli: verify covers files and inline certificates") {
  const fs::path store = scratch() / "verify_store.jsonl";
  REQUIRE(run_cli("orbit-test 41/18", "RELNUM_STORE=" + store.string()).code == 0);
  REQUIRE(run_cli("orbit-test 3/2", "RELNUM_STORE=" + store.string()).code == 0);

  const auto ok = run_cli("verify " + store.string());
  REQUIRE(ok.code == 0);
  REQUIRE(contains(ok.out, "2/2 certificates verify"));

  REQUIRE(run_cli("verify " + (scratch() / "no_such.jsonl").string()).code == 1);

  const fs::path empty = scratch() / "empty.jsonl";
  std::ofstream(empty).close();
  const auto vac = run_cli("verify " + empty.string());
  REQUIRE(vac.code == 0);
  REQUIRE(contains(vac.out, "vacuously"));

  const auto good =
      run_cli("verify --alpha 41/18 --word 'A^-22 B^-2 A B^-1 A' --target zero");
  REQUIRE(good.code == 0);
  REQUIRE(contains(good.out, "verified:"));

  const auto bad = run_cli("verify --alpha 41/18 --word 'A^-22 B^-2 A B^-1 A^2' --target zero");
  REQUIRE(bad.code == 5);
  REQUIRE(contains(bad.out, "FAILS"));

  // a store with one tampered line fails as a whole, naming the line
  {
    std::ofstream app(store, std::ios::app);
    app << R"({"alpha":"41/18","word":[["A","1"]],"target":"zero"})" << "\n";
  }
  const auto mixed = run_cli("verify " + store.string());
  REQUIRE(mixed.code == 5);
  REQUIRE(contains(mixed.out, "line 3: FAILS"));
  REQUIRE(contains(mixed.out, "2/3 certificates verify"));
}

TEST_CASE("cli: config file sets the budget, flags override it") {
  const fs::path cfg = scratch() / "budget.json";
  {
    std::ofstream out(cfg);
    out << R"({"max_letters": 2, "max_abs_exponent": 3, "max_nodes": 10000})";
  }
  const std::string env = "RELNUM_CONFIG=" + cfg.string();

  const auto found = run_cli("orbit-test 3/2", env);
  REQUIRE(found.code == 0);
  REQUIRE(contains(found.out, "B^2 A^-1"));

  // flag overrides the config's max_abs_exponent 3
  const auto exhausted = run_cli("orbit-test 41/18 --max-exp 2", env);
  REQUIRE(exhausted.code == 3);
  REQUIRE(contains(exhausted.out, "|exp| <= 2"));
  REQUIRE(contains(exhausted.out, "letters <= 2"));
}
