// Scoring computed inferences against gold annotations.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hlinfer/corpus.hpp"
#include "hlinfer/text.hpp"
#include "hlinfer/trigger_engine.hpp"

namespace hlinfer {

enum class MatchMode { ExactNormalized, TokenJaccard };

inline std::optional<MatchMode> parse_match_mode(std::string_view s) {
  if (s == "exact") return MatchMode::ExactNormalized;
  if (s == "jaccard") return MatchMode::TokenJaccard;
  return std::nullopt;
}

inline std::string_view to_string(MatchMode m) { return m == MatchMode::ExactNormalized ? "exact" : "jaccard"; }

struct MatchConfig {
  MatchMode mode = MatchMode::ExactNormalized;
  double jaccard_threshold = 0.6;

  void validate() const {
    if (!(jaccard_threshold >= 0.0 && jaccard_threshold <= 1.0))
      throw std::invalid_argument("jaccard threshold must lie in [0, 1]");
  }
};

/// Lowercase, punctuation-free, whitespace-collapsed comparison form. The
/// "can be" / "can have" compound renderings collapse to "can-have".
inline std::string normalize(std::string_view s) {
  static const std::regex can_family(R"(\bcan (be|have)( ?/ ?can (be|have))?\b)");
  std::vector<char32_t> kept;
  for (char32_t c : text::decode(s)) {
    if (c == U'/') {
      kept.push_back(U'/');
    } else if (text::is_dash(c)) {
      kept.push_back(U' ');
    } else if (!text::is_punctuation(c)) {
      kept.push_back(c);
    }
  }
  auto lowered = text::to_lower(text::collapse_whitespace(text::encode(kept)));
  lowered = std::regex_replace(lowered, can_family, "can-have");
  // Any slash left over is ordinary punctuation.
  std::replace(lowered.begin(), lowered.end(), '/', ' ');
  return text::collapse_whitespace(lowered);
}

/// Jaccard similarity of the normalized token sets.
inline double token_jaccard(std::string_view a, std::string_view b) {
  const auto wa = text::split_whitespace(normalize(a));
  const auto wb = text::split_whitespace(normalize(b));
  const std::set<std::string> sa(wa.begin(), wa.end()), sb(wb.begin(), wb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& w : sa) common += sb.count(w);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

struct Alignment {
  std::size_t computed_count = 0;
  std::size_t gold_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (computed index, gold index)
  std::vector<std::size_t> unmatched_computed;
  std::vector<std::size_t> unmatched_gold;

  std::size_t matched() const { return pairs.size(); }
};

/// Greedy one-to-one alignment. `judged` pairs (computed text, gold text) are
/// taken first, then exact normalized matches, then in Jaccard mode the best
/// remaining pairs at or above the threshold.
inline Alignment align(const std::vector<std::string>& computed, const std::vector<std::string>& gold,
                       const MatchConfig& cfg = {},
                       const std::vector<std::pair<std::string, std::string>>& judged = {}) {
  cfg.validate();
  Alignment a;
  a.computed_count = computed.size();
  a.gold_count = gold.size();
  std::vector<std::string> nc, ng;
  for (const auto& c : computed) nc.push_back(normalize(c));
  for (const auto& g : gold) ng.push_back(normalize(g));
  std::vector<bool> used_c(computed.size(), false), used_g(gold.size(), false);
  auto take = [&](std::size_t ci, std::size_t gi) {
    used_c[ci] = used_g[gi] = true;
    a.pairs.emplace_back(ci, gi);
  };

  for (const auto& [jc, jg] : judged) {
    const auto njc = normalize(jc), njg = normalize(jg);
    std::optional<std::size_t> ci, gi;
    for (std::size_t i = 0; i < nc.size() && !ci; ++i)
      if (!used_c[i] && nc[i] == njc) ci = i;
    for (std::size_t j = 0; j < ng.size() && !gi; ++j)
      if (!used_g[j] && ng[j] == njg) gi = j;
    if (ci && gi) take(*ci, *gi);
  }

  for (std::size_t j = 0; j < ng.size(); ++j) {
    if (used_g[j]) continue;
    for (std::size_t i = 0; i < nc.size(); ++i) {
      if (!used_c[i] && nc[i] == ng[j]) {
        take(i, j);
        break;
      }
    }
  }

  if (cfg.mode == MatchMode::TokenJaccard) {
    struct Candidate {
      double score;
      std::size_t gi, ci;
    };
    std::vector<Candidate> cands;
    for (std::size_t j = 0; j < ng.size(); ++j) {
      if (used_g[j]) continue;
      for (std::size_t i = 0; i < nc.size(); ++i) {
        if (used_c[i]) continue;
        const double s = token_jaccard(nc[i], ng[j]);
        if (s >= cfg.jaccard_threshold) cands.push_back({s, j, i});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
      if (x.score != y.score) return x.score > y.score;
      if (x.gi != y.gi) return x.gi < y.gi;
      return x.ci < y.ci;
    });
    for (const auto& c : cands)
      if (!used_c[c.ci] && !used_g[c.gi]) take(c.ci, c.gi);
  }

  std::sort(a.pairs.begin(), a.pairs.end());
  for (std::size_t i = 0; i < computed.size(); ++i)
    if (!used_c[i]) a.unmatched_computed.push_back(i);
  for (std::size_t j = 0; j < gold.size(); ++j)
    if (!used_g[j]) a.unmatched_gold.push_back(j);
  return a;
}

inline std::vector<std::string> texts_of(const std::vector<Inference>& v) {
  std::vector<std::string> out;
  for (const auto& i : v) out.push_back(i.text);
  return out;
}

inline std::vector<std::string> texts_of(const GoldAnnotation& g) {
  std::vector<std::string> out;
  for (const auto& i : g.inferences) out.push_back(i.text);
  return out;
}

inline Alignment match(const std::vector<Inference>& computed, const GoldAnnotation& gold, const MatchConfig& cfg = {},
                       const std::vector<std::pair<std::string, std::string>>& judged = {}) {
  return align(texts_of(computed), texts_of(gold), cfg, judged);
}

struct HeadlineScore {
  std::size_t gold_count = 0;
  std::size_t computed_count = 0;
  std::size_t matched_count = 0;
  std::size_t incorrect_count = 0;
  double percent_correct = 0.0;
  double percent_incorrect = 0.0;
};

inline double percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

/// One decimal place, for display.
inline double round1(double v) { return std::round(v * 10.0) / 10.0; }

inline HeadlineScore score_counts(std::size_t gold, std::size_t computed, std::size_t matched, std::size_t incorrect) {
  HeadlineScore s{gold, computed, matched, incorrect, 0.0, 0.0};
  s.percent_correct = gold == 0 ? (computed == 0 ? 100.0 : 0.0) : percent(matched, gold);
  s.percent_incorrect = percent(incorrect, computed);
  return s;
}

/// Indices of computed inferences judged incorrect. Without labels every
/// unmatched computed inference counts; with labels only listed texts do.
inline std::vector<std::size_t> incorrect_indices(const Alignment& a, const std::vector<std::string>& computed,
                                                  const std::optional<std::vector<std::string>>& labels) {
  if (!labels) return a.unmatched_computed;
  std::set<std::string> wanted;
  for (const auto& l : *labels) wanted.insert(normalize(l));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < computed.size(); ++i)
    if (wanted.count(normalize(computed[i]))) out.push_back(i);
  return out;
}

inline HeadlineScore score_headline(const Alignment& a, std::size_t incorrect_count) {
  return score_counts(a.gold_count, a.computed_count, a.matched(), incorrect_count);
}

inline HeadlineScore score_headline(const Alignment& a, const std::vector<std::string>& computed = {},
                                    const std::optional<std::vector<std::string>>& incorrect_labels = std::nullopt) {
  return score_headline(a, incorrect_indices(a, computed, incorrect_labels).size());
}

/// Human judgments for one headline: texts judged wrong and computed/gold
/// pairs judged equivalent.
struct HeadlineLabels {
  std::string headline;
  std::vector<std::string> incorrect;
  std::vector<std::pair<std::string, std::string>> matched;
};

struct HeadlineEvaluation {
  std::string headline;
  std::vector<Inference> computed;
  GoldAnnotation gold;
  Alignment alignment;
  std::vector<bool> incorrect;  // per computed inference
  HeadlineScore score;
  bool missing_inferences = false;  // gold headline absent from the computed file
};

inline HeadlineEvaluation evaluate_headline(std::vector<Inference> computed, GoldAnnotation gold,
                                            const MatchConfig& cfg = {},
                                            const std::optional<HeadlineLabels>& labels = std::nullopt) {
  HeadlineEvaluation ev;
  ev.headline = gold.headline;
  ev.computed = std::move(computed);
  ev.gold = std::move(gold);
  const auto ctexts = texts_of(ev.computed);
  ev.alignment = align(ctexts, texts_of(ev.gold), cfg, labels ? labels->matched : decltype(labels->matched){});
  std::optional<std::vector<std::string>> incorrect_labels;
  if (labels) incorrect_labels = labels->incorrect;
  ev.incorrect.assign(ev.computed.size(), false);
  const auto bad = incorrect_indices(ev.alignment, ctexts, incorrect_labels);
  for (auto i : bad) ev.incorrect[i] = true;
  ev.score = score_headline(ev.alignment, bad.size());
  return ev;
}

struct TriggerScore {
  std::string trigger;
  std::size_t computed_count = 0;
  std::size_t matched_count = 0;
  std::size_t incorrect_count = 0;
  std::size_t gold_tagged = 0;
  std::size_t gold_missing = 0;
  double percent_accurate = 0.0;
  double percent_inaccurate = 0.0;
  std::optional<double> percent_missing;  // unavailable when no gold carries the tag
};

/// Per-trigger accuracy over a corpus. Known rule ids come first in
/// registration order, other tags follow alphabetically.
inline std::vector<TriggerScore> score_by_trigger(const std::vector<HeadlineEvaluation>& evaluations) {
  std::map<std::string, TriggerScore> by;
  for (const auto& ev : evaluations) {
    std::vector<bool> gold_matched(ev.gold.inferences.size(), false);
    std::vector<bool> computed_matched(ev.computed.size(), false);
    for (auto [ci, gi] : ev.alignment.pairs) {
      computed_matched[ci] = true;
      gold_matched[gi] = true;
    }
    for (std::size_t i = 0; i < ev.computed.size(); ++i) {
      auto& s = by[ev.computed[i].trigger];
      ++s.computed_count;
      if (computed_matched[i]) ++s.matched_count;
      if (i < ev.incorrect.size() && ev.incorrect[i]) ++s.incorrect_count;
    }
    for (std::size_t j = 0; j < ev.gold.inferences.size(); ++j) {
      const auto& tag = ev.gold.inferences[j].trigger;
      if (!tag) continue;
      auto& s = by[*tag];
      ++s.gold_tagged;
      if (!gold_matched[j]) ++s.gold_missing;
    }
  }
  std::vector<TriggerScore> out;
  auto finish = [&](const std::string& id, TriggerScore s) {
    s.trigger = id;
    s.percent_accurate = percent(s.matched_count, s.computed_count);
    s.percent_inaccurate = percent(s.incorrect_count, s.computed_count);
    if (s.gold_tagged > 0) s.percent_missing = percent(s.gold_missing, s.gold_tagged);
    out.push_back(std::move(s));
  };
  for (const auto& id : all_rule_ids()) {
    auto it = by.find(id);
    if (it == by.end()) continue;
    finish(id, it->second);
    by.erase(it);
  }
  for (auto& [id, s] : by) finish(id, s);
  return out;
}

}  // namespace hlinfer
