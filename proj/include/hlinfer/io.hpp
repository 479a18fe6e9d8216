// File formats around the engine: inference JSON Lines, incorrect-label
// files, the key=value run config, evaluation reports and run manifests.

#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hlinfer/errors.hpp"
#include "hlinfer/evaluation.hpp"
#include "hlinfer/lexicon.hpp"
#include "hlinfer/text.hpp"
#include "hlinfer/trigger_engine.hpp"

namespace hlinfer {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Environment variable naming a directory that holds lexicon.tsv.
inline constexpr const char* kLexiconDirEnv = "HLINFER_LEXICON_DIR";

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Inference JSON Lines

struct InferenceRecord {
  std::string headline;
  std::vector<Inference> inferences;

  bool operator==(const InferenceRecord&) const = default;
};

inline nlohmann::json to_json(const Inference& inf) {
  return {{"kind", std::string(kind_symbol(inf.kind))}, {"text", inf.text}, {"trigger", inf.trigger}, {"span", inf.span}};
}

inline std::string render_inference_jsonl(const std::vector<InferenceRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::json infs = nlohmann::json::array();
    for (const auto& i : r.inferences) infs.push_back(to_json(i));
    nlohmann::json line = {{"headline", r.headline}, {"inferences", std::move(infs)}};
    out += line.dump() + "\n";
  }
  return out;
}

inline std::vector<InferenceRecord> parse_inference_jsonl(std::string_view document) {
  std::vector<InferenceRecord> out;
  const auto lines = text::split_lines(document);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto body = text::trim(lines[n]);
    if (body.empty()) continue;
    const auto where = "line " + std::to_string(n + 1) + ": ";
    try {
      const auto j = nlohmann::json::parse(body);
      InferenceRecord r;
      r.headline = j.at("headline").get<std::string>();
      for (const auto& ji : j.at("inferences")) {
        Inference inf;
        const auto kind = parse_kind_symbol(ji.at("kind").get<std::string>());
        if (!kind) throw FormatError(where + "unknown inference kind", std::string(body));
        inf.kind = *kind;
        inf.text = ji.at("text").get<std::string>();
        inf.trigger = ji.value("trigger", std::string());
        if (ji.contains("span")) inf.span = ji.at("span").get<std::vector<int>>();
        r.inferences.push_back(std::move(inf));
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + e.what(), std::string(body));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Incorrect labels: {"headline", "incorrect": [..], "matched": [{"computed", "gold"}]}

inline std::vector<HeadlineLabels> parse_labels_jsonl(std::string_view document) {
  std::vector<HeadlineLabels> out;
  const auto lines = text::split_lines(document);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto body = text::trim(lines[n]);
    if (body.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(body);
      HeadlineLabels l;
      l.headline = j.at("headline").get<std::string>();
      if (j.contains("incorrect")) l.incorrect = j.at("incorrect").get<std::vector<std::string>>();
      if (j.contains("matched"))
        for (const auto& m : j.at("matched"))
          l.matched.emplace_back(m.at("computed").get<std::string>(), m.at("gold").get<std::string>());
      out.push_back(std::move(l));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("line " + std::to_string(n + 1) + ": " + e.what(), std::string(body));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Run config: one "key = value" per line, '#' comments.
//
//   rules = triple,future,compound
//   verb_pattern = relaxed
//   compound_rendering = both
//   relaxed_nmod = false
//   lexicon = path/to/lexicon.tsv
//   match_mode = exact
//   jaccard_threshold = 0.6

struct RunConfig {
  EngineConfig engine;
  MatchConfig match;
  std::optional<std::string> lexicon_path;
};

inline bool parse_bool(std::string_view v, const std::string& where) {
  const auto s = text::to_lower(v);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw FormatError(where + "expected a boolean, got '" + std::string(v) + "'");
}

inline RunConfig parse_run_config(std::string_view document, RunConfig cfg = {}) {
  const auto lines = text::split_lines(document);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto body = text::trim(lines[n]);
    if (body.empty() || body.front() == '#') continue;
    const auto where = "config line " + std::to_string(n + 1) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw FormatError(where + "expected key = value", std::string(body));
    const std::string key(text::trim(body.substr(0, eq)));
    const std::string value(text::trim(body.substr(eq + 1)));
    try {
      if (key == "rules") {
        cfg.engine.enabled_rules = EngineConfig::parse_rule_list(value);
      } else if (key == "verb_pattern") {
        if (value == "strict") cfg.engine.verb_pattern = VerbPattern::Strict;
        else if (value == "relaxed") cfg.engine.verb_pattern = VerbPattern::Relaxed;
        else throw FormatError(where + "verb_pattern must be strict or relaxed", std::string(body));
      } else if (key == "compound_rendering") {
        const auto r = parse_compound_rendering(value);
        if (!r) throw FormatError(where + "compound_rendering must be both, can_be or can_have", std::string(body));
        cfg.engine.compound_rendering = *r;
      } else if (key == "relaxed_nmod") {
        cfg.engine.relaxed_nmod = parse_bool(value, where);
      } else if (key == "lexicon") {
        cfg.lexicon_path = value;
      } else if (key == "match_mode") {
        const auto m = parse_match_mode(value);
        if (!m) throw FormatError(where + "match_mode must be exact or jaccard", std::string(body));
        cfg.match.mode = *m;
      } else if (key == "jaccard_threshold") {
        std::size_t used = 0;
        cfg.match.jaccard_threshold = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        cfg.match.validate();
      } else {
        throw FormatError(where + "unknown key '" + key + "'", std::string(body));
      }
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError(where + e.what(), std::string(body));
    }
  }
  return cfg;
}

/// Lexicon resolution: explicit path, then $HLINFER_LEXICON_DIR/lexicon.tsv,
/// then the bundled copy.
inline std::shared_ptr<const TriggerLexicon> load_lexicon(const std::optional<std::string>& path) {
  if (path) return std::make_shared<TriggerLexicon>(TriggerLexicon::from_tsv(read_file(*path)));
  if (const char* dir = std::getenv(kLexiconDirEnv); dir && *dir) {
    const auto candidate = std::filesystem::path(dir) / "lexicon.tsv";
    if (std::filesystem::exists(candidate))
      return std::make_shared<TriggerLexicon>(TriggerLexicon::from_tsv(read_file(candidate)));
  }
  return std::shared_ptr<const TriggerLexicon>(&TriggerLexicon::bundled(), [](const auto*) {});
}

/// Canonical text form of an engine configuration plus its lexicon.
inline std::string canonical_config(const EngineConfig& cfg, const TriggerLexicon& lex) {
  std::string out = "rules=" + text::join(cfg.enabled_rules, ",") + "\n";
  out += std::string("verb_pattern=") + (cfg.verb_pattern == VerbPattern::Strict ? "strict" : "relaxed") + "\n";
  out += "compound_rendering=" + std::string(to_string(cfg.compound_rendering)) + "\n";
  out += std::string("relaxed_nmod=") + (cfg.relaxed_nmod ? "true" : "false") + "\n";
  out += "lexicon:\n" + lex.serialize();
  return out;
}

inline std::string config_hash(const EngineConfig& cfg, const TriggerLexicon& lex) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(text::fnv1a64(canonical_config(cfg, lex))));
  return buf;
}

// ---------------------------------------------------------------------------
// Evaluation reports

inline nlohmann::json to_json(const HeadlineScore& s) {
  return {{"gold_count", s.gold_count},
          {"computed_count", s.computed_count},
          {"matched_count", s.matched_count},
          {"incorrect_count", s.incorrect_count},
          {"percent_correct", round1(s.percent_correct)},
          {"percent_incorrect", round1(s.percent_incorrect)}};
}

inline nlohmann::json to_json(const TriggerScore& s) {
  nlohmann::json j = {{"trigger", s.trigger},
                      {"computed_count", s.computed_count},
                      {"matched_count", s.matched_count},
                      {"incorrect_count", s.incorrect_count},
                      {"gold_tagged", s.gold_tagged},
                      {"gold_missing", s.gold_missing},
                      {"percent_accurate", round1(s.percent_accurate)},
                      {"percent_inaccurate", round1(s.percent_inaccurate)}};
  j["percent_missing"] = s.percent_missing ? nlohmann::json(round1(*s.percent_missing)) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json evaluation_report(const std::vector<HeadlineEvaluation>& evs, const std::vector<TriggerScore>& triggers,
                                        const MatchConfig& cfg) {
  nlohmann::json headlines = nlohmann::json::array();
  for (const auto& ev : evs) {
    auto j = to_json(ev.score);
    j["headline"] = ev.headline;
    j["missing_inferences"] = ev.missing_inferences;
    nlohmann::json pairs = nlohmann::json::array();
    for (auto [ci, gi] : ev.alignment.pairs)
      pairs.push_back({{"computed", ev.computed[ci].text}, {"gold", ev.gold.inferences[gi].text}});
    j["matches"] = std::move(pairs);
    headlines.push_back(std::move(j));
  }
  nlohmann::json trig = nlohmann::json::array();
  for (const auto& t : triggers) trig.push_back(to_json(t));
  return {{"match_mode", std::string(to_string(cfg.mode))},
          {"jaccard_threshold", cfg.jaccard_threshold},
          {"headlines", std::move(headlines)},
          {"triggers", std::move(trig)}};
}

/// Trigger table in the column order accurate / inaccurate / missing.
inline std::string trigger_tsv(const std::vector<TriggerScore>& triggers) {
  std::string out = "trigger\taccurate\tinaccurate\tmissing\n";
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", round1(v));
    return std::string(buf);
  };
  for (const auto& t : triggers)
    out += t.trigger + "\t" + fmt(t.percent_accurate) + "\t" + fmt(t.percent_inaccurate) + "\t" +
           (t.percent_missing ? fmt(*t.percent_missing) : std::string("NA")) + "\n";
  return out;
}

}  // namespace hlinfer
