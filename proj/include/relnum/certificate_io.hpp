#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "families.hpp"
#include "orbit.hpp"
#include "word.hpp"

namespace relnum {

// One line per certificate, JSON, insertion-ordered keys so identical inputs
// serialize byte-identically. The timestamp is optional precisely so runs can
// be made reproducible.
struct CertMeta {
  std::string command;
  std::optional<SearchBudget> budget;
  std::optional<std::string> timestamp;
  std::optional<std::string> family;  // which generator produced the line
  std::optional<FiveParams> params;
};

struct StoredCertificate {
  Certificate cert;
  nlohmann::ordered_json meta;  // kept verbatim for round-trips
};

inline nlohmann::ordered_json certificate_to_json(const Certificate& cert,
                                                  const CertMeta& meta = {}) {
  nlohmann::ordered_json j;
  j["alpha"] = format_rational(cert.alpha);
  auto& w = j["word"] = nlohmann::ordered_json::array();
  for (const Letter& l : cert.word)
    w.push_back({std::string(1, gen_char(l.gen)), l.exp.get_str()});
  j["target"] = target_name(cert.target);
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  if (!meta.command.empty()) m["command"] = meta.command;
  if (meta.budget)
    m["budget"] = {{"max_letters", meta.budget->max_letters},
                   {"max_abs_exponent", meta.budget->max_abs_exponent},
                   {"max_nodes", meta.budget->max_nodes}};
  if (meta.family) m["family"] = *meta.family;
  if (meta.params)
    m["params"] = {{"x", meta.params->x.get_str()},
                   {"y", meta.params->y.get_str()},
                   {"n3", meta.params->n3.get_str()},
                   {"n4", meta.params->n4.get_str()},
                   {"n5", meta.params->n5.get_str()}};
  if (meta.timestamp) m["timestamp"] = *meta.timestamp;
  if (!m.empty()) j["meta"] = std::move(m);
  return j;
}

inline std::string certificate_line(const Certificate& cert, const CertMeta& meta = {}) {
  return certificate_to_json(cert, meta).dump();
}

inline StoredCertificate certificate_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("alpha") || !j.contains("word") || !j.contains("target"))
    throw std::runtime_error("certificate object needs alpha, word, target");
  Certificate cert;
  cert.alpha = parse_rational(j.at("alpha").get<std::string>());
  for (const auto& entry : j.at("word")) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::runtime_error("word entries must be [letter, exponent] pairs");
    const std::string g = entry[0].get<std::string>();
    if (g != "A" && g != "B") throw std::runtime_error("unknown generator '" + g + "'");
    BigInt e;
    if (mpz_set_str(e.get_mpz_t(), entry[1].get<std::string>().c_str(), 10) != 0)
      throw std::runtime_error("bad exponent '" + entry[1].get<std::string>() + "'");
    cert.word.push_back(Letter{g == "A" ? Gen::A : Gen::B, e});
  }
  const std::string t = j.at("target").get<std::string>();
  if (t != "zero" && t != "infinity") throw std::runtime_error("unknown target '" + t + "'");
  cert.target = t == "zero" ? TargetKind::FromZero : TargetKind::FromInfinity;
  if (!is_normal_form(cert.word)) throw std::runtime_error("word is not in normal form");
  StoredCertificate out{std::move(cert), nlohmann::ordered_json::object()};
  if (j.contains("meta")) out.meta = j.at("meta");
  return out;
}

inline StoredCertificate parse_certificate_line(const std::string& line) {
  return certificate_from_json(nlohmann::ordered_json::parse(line));
}

// Append-only line store, deduplicated on the (alpha, word) pair.
class CertificateStore {
 public:
  explicit CertificateStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }

  // All stored certificates; parse failures carry 1-based line numbers.
  // With verify: any stored line failing exact re-verification throws too.
  std::vector<StoredCertificate> load(bool verify_on_read) const {
    std::vector<StoredCertificate> out;
    std::ifstream in(path_);
    if (!in) return out;
    std::string line;
    for (size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (line.empty()) continue;
      try {
        out.push_back(parse_certificate_line(line));
      } catch (const std::exception& e) {
        throw std::runtime_error(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
      if (verify_on_read && !verify_certificate(out.back().cert))
        throw std::runtime_error(path_.string() + ":" + std::to_string(lineno) +
                                 ": stored certificate fails verification");
    }
    return out;
  }

  // Returns whether the line was written (false: already present).
  bool append(const Certificate& cert, const CertMeta& meta = {}) {
    ensure_keys();
    if (!keys_->insert(dedup_key(cert)).second) return false;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot open store " + path_.string());
    out << certificate_line(cert, meta) << '\n';
    return true;
  }

  static std::string dedup_key(const Certificate& cert) {
    return format_rational(cert.alpha) + "|" + format_word(cert.word);
  }

 private:
  void ensure_keys() {
    if (keys_) return;
    keys_.emplace();
    for (const auto& sc : load(false)) keys_->insert(dedup_key(sc.cert));
  }

  std::filesystem::path path_;
  std::optional<std::set<std::string>> keys_;
};

}  // namespace relnum
