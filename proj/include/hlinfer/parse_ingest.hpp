// Dependency-parse ingestion: CoNLL-U and Stanford-style JSON tuples.
//
// A ParsedHeadline is immutable once built. Every constructor path goes
// through make_headline(), which normalizes labels and checks the tree.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hlinfer/errors.hpp"
#include "hlinfer/text.hpp"

namespace hlinfer {

struct Token {
  int index = 0;  // 1-based
  std::string surface;
  std::optional<std::string> lemma;
  std::string pos;  // Penn Treebank tag

  bool operator==(const Token&) const = default;
};

inline constexpr int kRootIndex = 0;
inline constexpr std::string_view kRootGloss = "ROOT";

struct DependencyEdge {
  std::string dep;
  int governor = 0;
  std::string governor_gloss;
  int dependent = 0;
  std::string dependent_gloss;

  /// Label before the first ':' ("nmod" for "nmod:poss").
  std::string_view base_label() const {
    const std::string_view d = dep;
    return d.substr(0, d.find(':'));
  }

  bool operator==(const DependencyEdge&) const = default;
};

struct TokenRange {
  int first = 0;  // inclusive token indices
  int last = 0;
  bool operator==(const TokenRange&) const = default;
};

struct ParsedHeadline {
  std::string headline_id;
  std::string raw_text;
  std::vector<Token> tokens;
  std::vector<DependencyEdge> edges;
  std::vector<TokenRange> quoted_spans;

  const Token* token(int index) const {
    if (index >= 1 && index <= static_cast<int>(tokens.size()) && tokens[index - 1].index == index)
      return &tokens[index - 1];
    for (const auto& t : tokens)
      if (t.index == index) return &t;
    return nullptr;
  }

  /// The edge whose dependent is `index` (its head attachment), if any.
  const DependencyEdge* head_edge(int index) const {
    for (const auto& e : edges)
      if (e.dependent == index) return &e;
    return nullptr;
  }

  /// Edges governed by `index`, optionally restricted to a label; sentence order.
  std::vector<const DependencyEdge*> dependents(int index, std::string_view dep = {}) const {
    std::vector<const DependencyEdge*> out;
    for (const auto& e : edges)
      if (e.governor == index && (dep.empty() || e.dep == dep)) out.push_back(&e);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto* a, const auto* b) { return a->dependent < b->dependent; });
    return out;
  }

  const DependencyEdge* first_dependent(int index, std::string_view dep) const {
    auto deps = dependents(index, dep);
    return deps.empty() ? nullptr : deps.front();
  }

  const DependencyEdge* root_edge() const {
    for (const auto& e : edges)
      if (e.dep == "root") return &e;
    return nullptr;
  }

  bool operator==(const ParsedHeadline&) const = default;
};

// ---------------------------------------------------------------------------
// Label normalization

namespace detail {

inline std::string normalize_label(std::string_view label) {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"obj", "dobj"}, {"obl", "nmod"}, {"nn", "compound"}, {"ROOT", "root"}, {"Root", "root"}};
  if (auto it = table.find(label); it != table.end()) return it->second;
  if (text::starts_with(label, "obl:")) return "nmod" + std::string(label.substr(3));
  return std::string(label);
}

}  // namespace detail

/// Maps UD v2 labels onto the Stanford-dependency vocabulary the rules use and
/// specializes conj edges coordinated by "but" to conj:but. Idempotent.
inline std::vector<DependencyEdge> normalize_labels(std::vector<DependencyEdge> edges,
                                                    const std::vector<Token>& /*tokens*/ = {}) {
  for (auto& e : edges) e.dep = detail::normalize_label(e.dep);

  // "but" may hang off the first conjunct (SD) or the second one (UD v2).
  std::set<int> but_heads;
  for (const auto& e : edges)
    if (e.dep == "cc" && text::iequals(e.dependent_gloss, "but")) but_heads.insert(e.governor);
  for (auto& e : edges) {
    if (e.dep == "conj" && (but_heads.count(e.governor) || but_heads.count(e.dependent))) e.dep = "conj:but";
  }
  return edges;
}

// ---------------------------------------------------------------------------
// Validation

/// Checks the token/edge invariants; throws ConsistencyError on the first violation.
inline void validate(const ParsedHeadline& h) {
  std::set<int> seen;
  for (const auto& t : h.tokens) {
    if (t.index < 1) throw ConsistencyError("token index must be >= 1, got " + std::to_string(t.index));
    if (!seen.insert(t.index).second) throw ConsistencyError("duplicate token index " + std::to_string(t.index));
    if (t.pos.empty()) throw ConsistencyError("empty POS tag on token " + std::to_string(t.index));
  }
  int roots = 0;
  std::map<int, int> incoming;
  for (const auto& e : h.edges) {
    if (e.dependent == e.governor)
      throw ConsistencyError("edge " + e.dep + " attaches token " + std::to_string(e.dependent) + " to itself");
    const Token* dep = h.token(e.dependent);
    if (!dep) throw ConsistencyError("edge " + e.dep + " references missing dependent " + std::to_string(e.dependent));
    if (dep->surface != e.dependent_gloss)
      throw ConsistencyError("dependentGloss '" + e.dependent_gloss + "' does not match token " +
                             std::to_string(e.dependent) + " surface '" + dep->surface + "'");
    if (e.governor == kRootIndex) {
      if (e.dep != "root") throw ConsistencyError("edge " + e.dep + " hangs off the virtual root; only root may");
      if (e.governor_gloss != kRootGloss)
        throw ConsistencyError("governor 0 must carry gloss ROOT, got '" + e.governor_gloss + "'");
    } else {
      const Token* gov = h.token(e.governor);
      if (!gov) throw ConsistencyError("edge " + e.dep + " references missing governor " + std::to_string(e.governor));
      if (gov->surface != e.governor_gloss)
        throw ConsistencyError("governorGloss '" + e.governor_gloss + "' does not match token " +
                               std::to_string(e.governor) + " surface '" + gov->surface + "'");
    }
    if (e.dep == "root") ++roots;
    ++incoming[e.dependent];
  }
  if (roots != 1) throw ConsistencyError("expected exactly one root edge, found " + std::to_string(roots));
  for (const auto& t : h.tokens) {
    const int n = incoming.count(t.index) ? incoming.at(t.index) : 0;
    if (n != 1)
      throw ConsistencyError("token " + std::to_string(t.index) + " is the dependent of " + std::to_string(n) +
                             " edges, expected 1");
  }
  // Every token must reach the virtual root without revisiting a node.
  for (const auto& t : h.tokens) {
    int cur = t.index;
    std::size_t steps = 0;
    while (cur != kRootIndex) {
      const auto* e = h.head_edge(cur);
      cur = e->governor;
      if (++steps > h.tokens.size()) throw ConsistencyError("dependency cycle through token " + std::to_string(t.index));
    }
  }
  const auto* root = h.root_edge();
  if (root->governor != kRootIndex) throw ConsistencyError("root edge must hang off governor 0");
}

inline ParsedHeadline make_headline(std::string id, std::string raw_text, std::vector<Token> tokens,
                                    std::vector<DependencyEdge> edges) {
  ParsedHeadline h;
  h.headline_id = std::move(id);
  h.tokens = std::move(tokens);
  std::stable_sort(h.tokens.begin(), h.tokens.end(), [](const Token& a, const Token& b) { return a.index < b.index; });
  h.edges = normalize_labels(std::move(edges), h.tokens);
  if (raw_text.empty()) {
    std::vector<std::string> words;
    for (const auto& t : h.tokens) words.push_back(t.surface);
    raw_text = text::join(words, " ");
  }
  h.raw_text = std::move(raw_text);
  validate(h);
  return h;
}

// ---------------------------------------------------------------------------
// CoNLL-U

namespace detail {

inline std::string upos_to_ptb(std::string_view upos, std::string_view form) {
  static const std::set<std::string, std::less<>> modals = {"will", "would", "can", "could", "shall",
                                                            "should", "may", "might", "must"};
  const std::string lower = text::to_lower(form);
  if (upos == "NOUN") return "NN";
  if (upos == "PROPN") return "NNP";
  if (upos == "VERB") return "VB";
  if (upos == "AUX") return modals.count(lower) ? "MD" : "VB";
  if (upos == "ADJ") return "JJ";
  if (upos == "ADV") return "RB";
  if (upos == "PRON") return "PRP";
  if (upos == "DET") return "DT";
  if (upos == "ADP" || upos == "SCONJ") return "IN";
  if (upos == "CCONJ") return "CC";
  if (upos == "NUM") return "CD";
  if (upos == "PART") return lower == "to" ? "TO" : "RP";
  if (upos == "PUNCT") return ".";
  if (upos == "SYM") return "SYM";
  if (upos == "INTJ") return "UH";
  return "FW";
}

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

struct PendingSentence {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<std::pair<int, std::string>> heads;  // (head, deprel) per token
  std::vector<std::size_t> lines;
  std::size_t first_line = 0;
};

inline ParsedHeadline finish_sentence(PendingSentence& s, std::size_t ordinal) {
  std::vector<DependencyEdge> edges;
  const int n = static_cast<int>(s.tokens.size());
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const auto& [head, rel] = s.heads[i];
    if (head < 0 || head > n)
      throw ParseError("head index " + std::to_string(head) + " outside sentence of " + std::to_string(n) + " tokens",
                       s.lines[i]);
    DependencyEdge e;
    e.dep = rel;
    e.governor = head;
    e.governor_gloss = head == kRootIndex ? std::string(kRootGloss) : s.tokens[head - 1].surface;
    e.dependent = s.tokens[i].index;
    e.dependent_gloss = s.tokens[i].surface;
    edges.push_back(std::move(e));
  }
  for (int i = 0; i < n; ++i) {
    if (s.tokens[i].index != i + 1)
      throw ParseError("token ids must run 1..n, found " + std::to_string(s.tokens[i].index), s.lines[i]);
  }
  std::string id = s.id.empty() ? std::to_string(ordinal) : s.id;
  try {
    return make_headline(std::move(id), s.text, std::move(s.tokens), std::move(edges));
  } catch (const ConsistencyError& err) {
    throw ParseError(err.what(), s.first_line);
  }
}

}  // namespace detail

/// Parses a CoNLL-U document. Sentence ids come from "# sent_id =" when
/// present, else the 1-based sentence ordinal.
inline std::vector<ParsedHeadline> parse_conllu(std::string_view document) {
  std::vector<ParsedHeadline> out;
  detail::PendingSentence cur;
  const auto lines = text::split(document, '\n');
  auto flush = [&] {
    if (!cur.tokens.empty()) out.push_back(detail::finish_sentence(cur, out.size() + 1));
    cur = {};
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t lineno = i + 1;
    if (text::trim(line).empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      const auto body = text::trim(std::string_view(line).substr(1));
      if (text::starts_with(body, "sent_id")) {
        const auto eq = body.find('=');
        if (eq != std::string_view::npos) cur.id = std::string(text::trim(body.substr(eq + 1)));
      } else if (text::starts_with(body, "text")) {
        const auto eq = body.find('=');
        if (eq != std::string_view::npos && text::trim(body.substr(0, eq)) == "text")
          cur.text = std::string(text::trim(body.substr(eq + 1)));
      }
      continue;
    }
    const auto cols = text::split(line, '\t');
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()), lineno);
    if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) continue;
    if (!detail::all_digits(cols[0])) throw ParseError("non-integer token id '" + cols[0] + "'", lineno);
    if (!detail::all_digits(cols[6])) throw ParseError("non-integer head '" + cols[6] + "'", lineno);
    Token t;
    t.index = std::stoi(cols[0]);
    t.surface = cols[1];
    if (cols[2] != "_") t.lemma = cols[2];
    t.pos = cols[4] != "_" ? cols[4] : detail::upos_to_ptb(cols[3], cols[1]);
    if (cur.tokens.empty()) cur.first_line = lineno;
    cur.tokens.push_back(std::move(t));
    cur.heads.emplace_back(std::stoi(cols[6]), cols[7]);
    cur.lines.push_back(lineno);
  }
  flush();
  return out;
}

/// Renders headlines back to CoNLL-U (XPOS carries the PTB tag, UPOS is "_").
inline std::string render_conllu(const std::vector<ParsedHeadline>& headlines) {
  std::string out;
  for (const auto& h : headlines) {
    out += "# sent_id = " + h.headline_id + "\n# text = " + h.raw_text + "\n";
    for (const auto& t : h.tokens) {
      const auto* e = h.head_edge(t.index);
      out += std::to_string(t.index) + "\t" + t.surface + "\t" + t.lemma.value_or("_") + "\t_\t" + t.pos + "\t_\t" +
             std::to_string(e ? e->governor : 0) + "\t" + (e ? e->dep : "dep") + "\t_\t_\n";
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stanford JSON

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ParseError("missing key '" + std::string(key) + "' in " + std::string(where));
  return obj.at(key);
}

template <typename T>
T get_as(const nlohmann::json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("key '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline ParsedHeadline parse_stanford_json(const nlohmann::json& obj, std::string fallback_id = {}) {
  if (!obj.is_object()) throw ParseError("headline parse must be a JSON object");
  std::vector<Token> tokens;
  for (const auto& jt : detail::require(obj, "tokens", "headline object")) {
    Token t;
    t.index = detail::get_as<int>(detail::require(jt, "index", "token"), "index");
    t.surface = detail::get_as<std::string>(detail::require(jt, "word", "token"), "word");
    t.pos = detail::get_as<std::string>(detail::require(jt, "pos", "token"), "pos");
    if (jt.contains("lemma")) t.lemma = detail::get_as<std::string>(jt.at("lemma"), "lemma");
    tokens.push_back(std::move(t));
  }
  const char* dep_key = obj.contains("dependencies") ? "dependencies" : "basicDependencies";
  std::vector<DependencyEdge> edges;
  for (const auto& jd : detail::require(obj, dep_key, "headline object")) {
    DependencyEdge e;
    e.dep = detail::get_as<std::string>(detail::require(jd, "dep", "dependency"), "dep");
    e.governor = detail::get_as<int>(detail::require(jd, "governor", "dependency"), "governor");
    e.governor_gloss = detail::get_as<std::string>(detail::require(jd, "governorGloss", "dependency"), "governorGloss");
    e.dependent = detail::get_as<int>(detail::require(jd, "dependent", "dependency"), "dependent");
    e.dependent_gloss =
        detail::get_as<std::string>(detail::require(jd, "dependentGloss", "dependency"), "dependentGloss");
    edges.push_back(std::move(e));
  }
  std::string id = fallback_id;
  if (obj.contains("id")) id = obj.at("id").is_string() ? obj.at("id").get<std::string>() : obj.at("id").dump();
  std::string raw = obj.contains("headline") ? detail::get_as<std::string>(obj.at("headline"), "headline") : "";
  return make_headline(std::move(id), std::move(raw), std::move(tokens), std::move(edges));
}

inline ParsedHeadline parse_stanford_json(std::string_view document) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what());
  }
  return parse_stanford_json(obj);
}

inline nlohmann::json render_stanford_json(const ParsedHeadline& h) {
  nlohmann::json obj;
  obj["id"] = h.headline_id;
  obj["headline"] = h.raw_text;
  obj["tokens"] = nlohmann::json::array();
  for (const auto& t : h.tokens) {
    nlohmann::json jt = {{"index", t.index}, {"word", t.surface}, {"pos", t.pos}};
    if (t.lemma) jt["lemma"] = *t.lemma;
    obj["tokens"].push_back(std::move(jt));
  }
  obj["dependencies"] = nlohmann::json::array();
  for (const auto& e : h.edges) {
    obj["dependencies"].push_back({{"dep", e.dep},
                                   {"governor", e.governor},
                                   {"governorGloss", e.governor_gloss},
                                   {"dependent", e.dependent},
                                   {"dependentGloss", e.dependent_gloss}});
  }
  return obj;
}

/// Accepts a JSON array of headline objects, a single object, or JSON Lines.
/// Headlines without an "id" key get their 1-based ordinal.
inline std::vector<ParsedHeadline> parse_stanford_document(std::string_view document) {
  std::vector<ParsedHeadline> out;
  const auto body = text::trim(document);
  if (body.empty()) return out;
  if (body.front() == '[') {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& err) {
      throw ParseError(std::string("invalid JSON: ") + err.what());
    }
    for (const auto& obj : arr) out.push_back(parse_stanford_json(obj, std::to_string(out.size() + 1)));
    return out;
  }
  const auto lines = text::split(document, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error& err) {
      // Not JSON Lines: fall back to one pretty-printed object.
      if (out.empty()) return {parse_stanford_json(body)};
      throw ParseError(std::string("invalid JSON: ") + err.what(), i + 1);
    }
    try {
      out.push_back(parse_stanford_json(obj, std::to_string(out.size() + 1)));
    } catch (const ParseError& err) {
      throw ParseError(err.what(), i + 1);
    } catch (const ConsistencyError& err) {
      throw ConsistencyError("line " + std::to_string(i + 1) + ": " + err.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Queries

enum class VerbPattern {
  Strict,   // literal 'V.+'
  Relaxed,  // 'V.*'
};

inline bool is_verb_tag(std::string_view pos, VerbPattern mode = VerbPattern::Relaxed) {
  if (pos.empty() || pos.front() != 'V') return false;
  return mode == VerbPattern::Relaxed || pos.size() >= 2;
}

/// 'N.+|P.+'
inline bool is_noun_tag(std::string_view pos) {
  return pos.size() >= 2 && (pos.front() == 'N' || pos.front() == 'P');
}

inline std::vector<Token> verbs_of(const ParsedHeadline& h, VerbPattern mode = VerbPattern::Relaxed) {
  std::vector<Token> out;
  for (const auto& t : h.tokens)
    if (is_verb_tag(t.pos, mode)) out.push_back(t);
  return out;
}

inline std::vector<Token> nouns_of(const ParsedHeadline& h) {
  std::vector<Token> out;
  for (const auto& t : h.tokens)
    if (is_noun_tag(t.pos)) out.push_back(t);
  return out;
}

inline std::vector<DependencyEdge> edges_with(const ParsedHeadline& h, std::string_view dep,
                                              std::optional<std::string_view> governor_gloss = std::nullopt,
                                              std::optional<std::string_view> dependent_gloss = std::nullopt) {
  std::vector<DependencyEdge> out;
  for (const auto& e : h.edges) {
    if (e.dep != dep) continue;
    if (governor_gloss && !text::iequals(e.governor_gloss, *governor_gloss)) continue;
    if (dependent_gloss && !text::iequals(e.dependent_gloss, *dependent_gloss)) continue;
    out.push_back(e);
  }
  return out;
}

}  // namespace hlinfer
