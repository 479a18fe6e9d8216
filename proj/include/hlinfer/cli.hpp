// Subcommands behind the hlinfer executable. Each returns a process exit
// status and writes diagnostics to `err`, so tests can drive them directly.

#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlinfer/corpus.hpp"
#include "hlinfer/evaluation.hpp"
#include "hlinfer/io.hpp"
#include "hlinfer/morphology.hpp"
#include "hlinfer/parse_ingest.hpp"
#include "hlinfer/trigger_engine.hpp"

namespace hlinfer::cli {

struct InferOptions {
  std::string dataset;
  std::string parses;
  std::optional<std::string> config;
  std::string out;
  bool strict = false;
  std::optional<std::string> rules;  // comma list, overrides the config file
  bool relaxed_nmod = false;
  bool write_manifest = true;
};

struct EvalOptions {
  std::string inferences;
  std::string gold;
  std::optional<std::string> labels;
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::string> tsv;
  std::optional<std::string> match_mode;
  std::optional<double> jaccard_threshold;
};

/// Parses either CoNLL-U or Stanford JSON, chosen by the first non-blank byte.
inline std::vector<ParsedHeadline> load_parses(std::string_view document) {
  const auto body = text::trim(document);
  if (body.empty()) return {};
  if (body.front() == '{' || body.front() == '[') return parse_stanford_document(body);
  return parse_conllu(body);
}

/// Pairs each dataset record with its parse: by id equal to the record's
/// ordinal or line number, else by identical headline text.
inline std::vector<const ParsedHeadline*> key_parses(const std::vector<HeadlineRecord>& records,
                                                     const std::vector<ParsedHeadline>& parses) {
  std::map<std::string, const ParsedHeadline*> by_id;
  std::map<std::string, const ParsedHeadline*> by_text;
  for (const auto& p : parses) {
    by_id.emplace(p.headline_id, &p);
    by_text.emplace(preprocess(p.raw_text).cleaned, &p);
  }
  std::vector<const ParsedHeadline*> out;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const ParsedHeadline* hit = nullptr;
    if (auto it = by_id.find(std::to_string(k + 1)); it != by_id.end()) {
      hit = it->second;
    } else if (auto it2 = by_id.find("line" + std::to_string(records[k].line_number)); it2 != by_id.end()) {
      hit = it2->second;
    } else if (auto it3 = by_text.find(preprocess(records[k].text).cleaned); it3 != by_text.end()) {
      hit = it3->second;
    }
    out.push_back(hit);
  }
  return out;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunConfig load_run_config(const std::optional<std::string>& path) {
  RunConfig cfg;
  if (path) cfg = parse_run_config(read_file(*path));
  return cfg;
}

inline int cmd_infer(const InferOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    auto cfg = load_run_config(opt.config);
    if (opt.rules) cfg.engine.enabled_rules = EngineConfig::parse_rule_list(*opt.rules);
    if (opt.relaxed_nmod) cfg.engine.relaxed_nmod = true;
    const auto lexicon = load_lexicon(cfg.lexicon_path);
    const InferenceEngine engine(cfg.engine, lexicon);

    const auto records = parse_dataset(read_file(opt.dataset));
    const auto parses = load_parses(read_file(opt.parses));
    const auto keyed = key_parses(records, parses);

    std::vector<InferenceRecord> results;
    nlohmann::json skipped = nlohmann::json::array();
    nlohmann::json counts = nlohmann::json::array();
    for (std::size_t k = 0; k < records.size(); ++k) {
      const auto& rec = records[k];
      if (!keyed[k]) {
        skipped.push_back({{"line", rec.line_number}, {"headline", rec.text}});
        err << "warning: no parse for dataset line " << rec.line_number << ": " << rec.text << "\n";
        continue;
      }
      ParsedHeadline h = *keyed[k];
      const auto p = preprocess(rec.text);
      h.quoted_spans = locate_quoted_spans(h, p);
      InferenceRecord r{rec.text, engine.infer_all(h, p)};
      counts.push_back({{"line", rec.line_number}, {"inferences", r.inferences.size()}});
      results.push_back(std::move(r));
    }

    write_file(opt.out, render_inference_jsonl(results));
    if (opt.write_manifest) {
      nlohmann::json manifest = {
          {"tool", "hlinfer"},
          {"version", std::string(kToolVersion)},
          {"inputs", {{"dataset", opt.dataset}, {"parses", opt.parses}, {"config", opt.config ? *opt.config : ""}}},
          {"config_hash", config_hash(cfg.engine, *lexicon)},
          {"rules", cfg.engine.enabled_rules},
          {"relaxed_nmod", cfg.engine.relaxed_nmod},
          {"headline_count", records.size()},
          {"per_headline", std::move(counts)},
          {"skipped", skipped},
          {"created_at", utc_timestamp()}};
      write_file(opt.out + ".manifest.json", manifest.dump(2) + "\n");
    }
    out << "wrote " << results.size() << " records to " << opt.out;
    if (!skipped.empty()) out << " (" << skipped.size() << " skipped)";
    out << "\n";
    if (opt.strict && !skipped.empty()) {
      err << "error: " << skipped.size() << " headline(s) without a parse (strict mode)\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    auto cfg = load_run_config(opt.config);
    if (opt.match_mode) {
      const auto m = parse_match_mode(*opt.match_mode);
      if (!m) throw std::invalid_argument("--match-mode must be exact or jaccard");
      cfg.match.mode = *m;
    }
    if (opt.jaccard_threshold) cfg.match.jaccard_threshold = *opt.jaccard_threshold;
    cfg.match.validate();

    const auto gold = parse_gold(read_file(opt.gold));
    const auto computed = parse_inference_jsonl(read_file(opt.inferences));
    std::vector<HeadlineLabels> labels;
    if (opt.labels) labels = parse_labels_jsonl(read_file(*opt.labels));

    auto find_record = [&](const std::string& headline) -> const InferenceRecord* {
      for (const auto& r : computed)
        if (r.headline == headline) return &r;
      const auto key = normalize(headline);
      for (const auto& r : computed)
        if (normalize(r.headline) == key) return &r;
      return nullptr;
    };
    auto find_labels = [&](const std::string& headline) -> std::optional<HeadlineLabels> {
      const auto key = normalize(headline);
      for (const auto& l : labels)
        if (normalize(l.headline) == key) return l;
      return std::nullopt;
    };

    std::vector<HeadlineEvaluation> evs;
    for (const auto& g : gold) {
      const auto* rec = find_record(g.headline);
      if (!rec) err << "warning: headline missing from inferences, counted all-missing: " << g.headline << "\n";
      auto ev = evaluate_headline(rec ? rec->inferences : std::vector<Inference>{}, g, cfg.match, find_labels(g.headline));
      ev.missing_inferences = rec == nullptr;
      evs.push_back(std::move(ev));
    }
    const auto triggers = score_by_trigger(evs);
    const auto report = evaluation_report(evs, triggers, cfg.match);
    if (opt.out) write_file(*opt.out, report.dump(2) + "\n");
    if (opt.tsv) write_file(*opt.tsv, trigger_tsv(triggers));

    out << std::fixed << std::setprecision(1);
    out << "correct%\tincorrect%\theadline\n";
    for (const auto& ev : evs)
      out << round1(ev.score.percent_correct) << "\t" << round1(ev.score.percent_incorrect) << "\t" << ev.headline << "\n";
    if (!triggers.empty()) out << "\n" << trigger_tsv(triggers);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int cmd_morph(const std::string& verb, const std::string& form, std::ostream& out, std::ostream& err) {
  const auto f = parse_verb_form(form);
  if (!f) {
    err << "error: unknown form '" << form << "' (expected base, past, participle, gerund or 3sg)\n";
    return 2;
  }
  out << Morphology::bundled().conjugate(verb, *f) << "\n";
  return 0;
}

inline int cmd_stats(const std::string& dataset, std::ostream& out, std::ostream& err) {
  try {
    const auto records = parse_dataset(read_file(dataset));
    std::map<std::string, std::size_t> sources;
    for (const auto& r : records) ++sources[r.source];
    out << "headlines\t" << records.size() << "\n";
    out << "sources\t" << sources.size() << "\n";
    for (const auto& [s, n] : sources) out << s << "\t" << n << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hlinfer::cli
