// Rule-based inference generation over a dependency-parsed headline.
//
// Each rule scans the edge list for one trigger pattern and fills a fixed
// template. Rules are independent and pure; infer_all() runs the enabled ones
// in registration order and drops case-insensitive duplicate texts.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hlinfer/corpus.hpp"
#include "hlinfer/lexicon.hpp"
#include "hlinfer/morphology.hpp"
#include "hlinfer/parse_ingest.hpp"
#include "hlinfer/text.hpp"

namespace hlinfer {

enum class InferenceKind { Presupposition, ConventionalImplicature, ExplicitTriple };

/// ">>", "~=" or "triple" as written in the JSON Lines output.
inline std::string_view kind_symbol(InferenceKind k) {
  switch (k) {
    case InferenceKind::Presupposition: return ">>";
    case InferenceKind::ConventionalImplicature: return "~=";
    case InferenceKind::ExplicitTriple: return "triple";
  }
  return ">>";
}

inline std::optional<InferenceKind> parse_kind_symbol(std::string_view s) {
  if (s == ">>") return InferenceKind::Presupposition;
  if (s == "~=" || s == "≈") return InferenceKind::ConventionalImplicature;
  if (s == "triple") return InferenceKind::ExplicitTriple;
  return std::nullopt;
}

struct Inference {
  InferenceKind kind = InferenceKind::Presupposition;
  std::string text;
  std::string trigger;
  std::vector<int> span;  // sorted, unique token indices

  bool operator==(const Inference&) const = default;
};

enum class CompoundRendering { CanBeCanHave, CanBe, CanHave };

inline std::optional<CompoundRendering> parse_compound_rendering(std::string_view s) {
  if (s == "both" || s == "can be/can have") return CompoundRendering::CanBeCanHave;
  if (s == "can_be" || s == "can be") return CompoundRendering::CanBe;
  if (s == "can_have" || s == "can have") return CompoundRendering::CanHave;
  return std::nullopt;
}

inline std::string_view to_string(CompoundRendering r) {
  switch (r) {
    case CompoundRendering::CanBeCanHave: return "both";
    case CompoundRendering::CanBe: return "can_be";
    case CompoundRendering::CanHave: return "can_have";
  }
  return "both";
}

namespace rule_id {
inline constexpr std::string_view kTriple = "triple";
inline constexpr std::string_view kFuture = "future";
inline constexpr std::string_view kBut = "but";
inline constexpr std::string_view kAgain = "again";
inline constexpr std::string_view kFurther = "further";
inline constexpr std::string_view kCompound = "compound";
inline constexpr std::string_view kPast = "past";
inline constexpr std::string_view kNmodOf = "nmod_of";
inline constexpr std::string_view kTemporal = "temporal";
inline constexpr std::string_view kQuestion = "question";
inline constexpr std::string_view kQuotes = "quotes";
}  // namespace rule_id

/// Every rule id in registration order.
inline const std::vector<std::string>& all_rule_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v = {"triple", "future", "but", "again", "further", "compound", "past", "nmod_of"};
    for (auto cls : kLexicalPredicateClasses) v.push_back("lexical." + std::string(cls));
    v.insert(v.end(), {"temporal", "question", "quotes"});
    return v;
  }();
  return ids;
}

inline bool is_known_rule(std::string_view id) {
  const auto& ids = all_rule_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

struct EngineConfig {
  std::vector<std::string> enabled_rules = all_rule_ids();
  VerbPattern verb_pattern = VerbPattern::Relaxed;
  CompoundRendering compound_rendering = CompoundRendering::CanBeCanHave;
  bool relaxed_nmod = false;

  bool enabled(std::string_view id) const {
    return std::find(enabled_rules.begin(), enabled_rules.end(), id) != enabled_rules.end();
  }

  /// Throws std::invalid_argument naming the first unknown rule id.
  void validate() const {
    for (const auto& id : enabled_rules)
      if (!is_known_rule(id)) throw std::invalid_argument("unknown rule id '" + id + "'");
  }

  /// Expands "lexical" to its five classes and checks every id.
  static std::vector<std::string> parse_rule_list(std::string_view csv) {
    std::vector<std::string> out;
    for (auto& raw : text::split(csv, ',')) {
      const std::string id(text::trim(raw));
      if (id.empty()) continue;
      if (id == "lexical") {
        for (auto cls : kLexicalPredicateClasses) out.push_back("lexical." + std::string(cls));
      } else if (id == "all") {
        out.insert(out.end(), all_rule_ids().begin(), all_rule_ids().end());
      } else if (is_known_rule(id)) {
        out.push_back(id);
      } else {
        throw std::invalid_argument("unknown rule id '" + id + "'");
      }
    }
    // Keep registration order, drop repeats.
    std::vector<std::string> ordered;
    for (const auto& id : all_rule_ids())
      if (std::find(out.begin(), out.end(), id) != out.end()) ordered.push_back(id);
    return ordered;
  }
};

// ---------------------------------------------------------------------------
// Tree helpers shared by the rules.

namespace engine_detail {

inline bool is_punct_token(const Token& t) {
  static const std::set<std::string, std::less<>> tags = {",", ".", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP", "#"};
  if (tags.count(t.pos)) return true;
  if (t.pos == "POS") return false;
  const auto cps = text::decode(t.surface);
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), [](char32_t c) { return text::is_punctuation(c); });
}

inline bool is_clitic(std::string_view surface) {
  return text::starts_with(surface, "'") || text::starts_with(surface, "’") || text::iequals(surface, "n't");
}

inline bool is_article(std::string_view w) {
  return text::iequals(w, "a") || text::iequals(w, "an") || text::iequals(w, "the");
}

inline bool is_subject_label(std::string_view dep) {
  return dep == "nsubj" || dep == "nsubjpass" || dep == "nsubj:pass" || dep == "nsubj:xsubj";
}

// Strips double quote characters a tokenizer may have left glued to a word.
inline std::string clean_surface(std::string_view s) {
  std::vector<char32_t> out;
  for (char32_t c : text::decode(s))
    if (!text::is_double_quote(c)) out.push_back(c);
  return text::encode(out);
}

/// Renders token indices in sentence order, attaching clitics ('s, n't).
inline std::string render(const ParsedHeadline& h, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::string out;
  for (int i : indices) {
    const Token* t = h.token(i);
    if (!t || is_punct_token(*t)) continue;
    const auto word = clean_surface(t->surface);
    if (word.empty()) continue;
    if (!out.empty() && !is_clitic(word)) out += ' ';
    out += word;
  }
  return out;
}

inline void collect_modifiers(const ParsedHeadline& h, int head, std::vector<int>& out, int depth = 0) {
  if (depth > 8) return;
  for (const auto* e : h.dependents(head)) {
    const auto base = e->base_label();
    const bool keep = e->dep == "compound" || e->dep == "nn" || base == "amod" || base == "nummod" ||
                      (base == "det" && !is_article(e->dependent_gloss)) || e->dep == "nmod:poss" ||
                      (e->dep == "case" && is_clitic(e->dependent_gloss));
    if (!keep) continue;
    out.push_back(e->dependent);
    collect_modifiers(h, e->dependent, out, depth + 1);
  }
}

/// The head plus its compound/amod/det/nummod/possessive modifiers.
inline std::vector<int> phrase_tokens(const ParsedHeadline& h, int head) {
  std::vector<int> out{head};
  collect_modifiers(h, head, out);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string phrase(const ParsedHeadline& h, int head) { return render(h, phrase_tokens(h, head)); }

inline const DependencyEdge* subject_edge(const ParsedHeadline& h, int pred) {
  for (const auto* e : h.dependents(pred))
    if (is_subject_label(e->dep)) return e;
  return nullptr;
}

/// The subject of a predicate: its own nsubj, else one inherited through
/// control (xcomp/conj), or the noun an acl/nmod chain hangs from.
inline std::optional<int> subject_of(const ParsedHeadline& h, int pred, int depth = 0) {
  if (depth > 8) return std::nullopt;
  if (const auto* e = subject_edge(h, pred)) return e->dependent;
  const auto* up = h.head_edge(pred);
  if (!up || up->governor == kRootIndex) return std::nullopt;
  const auto base = up->base_label();
  if (base == "xcomp" || base == "conj" || base == "advcl" || base == "ccomp") return subject_of(h, up->governor, depth + 1);
  if (base == "acl" || base == "nmod") {
    // Climb to the noun at the top of the nominal chain.
    int noun = up->governor;
    for (int guard = 0; guard < 8; ++guard) {
      const auto* ne = h.head_edge(noun);
      if (!ne || ne->governor == kRootIndex || is_subject_label(ne->dep)) return noun;
      const auto nb = ne->base_label();
      if (nb == "nmod" || nb == "compound" || nb == "appos" || nb == "conj") {
        noun = ne->governor;
        continue;
      }
      return subject_of(h, ne->governor, depth + 1);
    }
    return noun;
  }
  return std::nullopt;
}

inline std::string case_marker(const ParsedHeadline& h, int noun) {
  std::vector<int> cases;
  for (const auto* e : h.dependents(noun, "case"))
    if (!is_clitic(e->dependent_gloss)) cases.push_back(e->dependent);
  return render(h, cases);
}

/// Verb group as written: auxiliaries, negation and particles around the verb.
inline std::vector<int> verb_group(const ParsedHeadline& h, int verb) {
  std::vector<int> out{verb};
  for (const auto* e : h.dependents(verb)) {
    const auto base = e->base_label();
    if (base == "aux" || base == "auxpass" || base == "neg" || e->dep == "compound:prt" || e->dep == "prt" ||
        (base == "advmod" && (text::iequals(e->dependent_gloss, "not") || text::iequals(e->dependent_gloss, "n't"))))
      out.push_back(e->dependent);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int> particles(const ParsedHeadline& h, int verb) {
  std::vector<int> out;
  for (const auto* e : h.dependents(verb))
    if (e->dep == "compound:prt" || e->dep == "prt") out.push_back(e->dependent);
  return out;
}

inline bool is_negated(const ParsedHeadline& h, int pred) {
  for (const auto* e : h.dependents(pred)) {
    const auto base = e->base_label();
    if (base == "neg") return true;
    if (base == "advmod" && (text::iequals(e->dependent_gloss, "not") || text::iequals(e->dependent_gloss, "n't") ||
                             text::iequals(e->dependent_gloss, "never")))
      return true;
  }
  return false;
}

inline bool is_plain_nmod(const DependencyEdge& e) {
  return e.base_label() == "nmod" && e.dep != "nmod:poss" && e.dep != "nmod:tmod" && e.dep != "nmod:npmod";
}

/// Object attachments of a clause head: its dobj phrase and every
/// prepositional nmod, rendered in sentence order.
inline std::string clause_objects(const ParsedHeadline& h, int verb, std::vector<int>* span = nullptr) {
  std::vector<std::pair<int, std::string>> parts;
  for (int p : particles(h, verb)) parts.emplace_back(p, render(h, {p}));
  for (const auto* e : h.dependents(verb)) {
    if (e->dep == "dobj" || e->dep == "iobj") {
      auto toks = phrase_tokens(h, e->dependent);
      parts.emplace_back(toks.front(), render(h, toks));
      if (span) span->insert(span->end(), toks.begin(), toks.end());
    } else if (is_plain_nmod(*e)) {
      auto toks = phrase_tokens(h, e->dependent);
      auto prep = case_marker(h, e->dependent);
      parts.emplace_back(toks.front(), prep.empty() ? render(h, toks) : prep + " " + render(h, toks));
      if (span) span->insert(span->end(), toks.begin(), toks.end());
    }
  }
  std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> words;
  for (auto& [_, s] : parts)
    if (!s.empty()) words.push_back(std::move(s));
  return text::join(words, " ");
}

inline std::string join_nonempty(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

inline std::vector<int> normalized_span(std::vector<int> span) {
  std::sort(span.begin(), span.end());
  span.erase(std::unique(span.begin(), span.end()), span.end());
  span.erase(std::remove_if(span.begin(), span.end(), [](int i) { return i < 1; }), span.end());
  return span;
}

inline const std::map<std::string, std::string, std::less<>>& wh_substitutes() {
  static const std::map<std::string, std::string, std::less<>> m = {
      {"what", "something"}, {"who", "someone"},   {"whom", "someone"},
      {"where", "somewhere"}, {"how", "somehow"},  {"when", "sometime"}};
  return m;
}

inline std::string expand_contraction(const Token& t) {
  const auto w = text::to_lower(t.surface);
  if (w == "'s" || w == "’s") return "is";
  if (w == "'re" || w == "’re") return "are";
  if (w == "'m" || w == "’m") return "am";
  if (w == "'ve" || w == "’ve") return "have";
  if (w == "'ll" || w == "’ll") return "will";
  if (w == "'d" || w == "’d") return "would";
  return clean_surface(t.surface);
}

inline const std::set<std::string, std::less<>>& speech_verbs() {
  static const std::set<std::string, std::less<>> s = {"say", "tell", "claim", "add", "warn", "announce"};
  return s;
}

inline const std::set<std::string, std::less<>>& cessation_verbs() {
  static const std::set<std::string, std::less<>> s = {"stop", "cease", "quit", "finish", "end", "halt", "discontinue"};
  return s;
}

}  // namespace engine_detail

// ---------------------------------------------------------------------------

/// Locates each quoted span of `p` in the token sequence of `h`.
/// Spans whose words cannot be found are left out.
inline std::vector<TokenRange> locate_quoted_spans(const ParsedHeadline& h, const PreprocessedHeadline& p) {
  using engine_detail::is_clitic;
  using engine_detail::is_punct_token;
  // Word units: a token plus any clitics glued to it ("May" + "'s").
  struct Unit {
    std::string word;
    int first;
    int last;
  };
  std::vector<Unit> units;
  for (const auto& t : h.tokens) {
    if (is_punct_token(t)) continue;
    const auto w = text::to_lower(engine_detail::clean_surface(t.surface));
    if (!units.empty() && is_clitic(w) && units.back().last == t.index - 1) {
      units.back().word += w;
      units.back().last = t.index;
    } else {
      units.push_back({w, t.index, t.index});
    }
  }
  std::vector<TokenRange> out;
  for (const auto& span : p.quoted_spans) {
    const auto words = text::split_whitespace(text::to_lower(preprocess(span.text).cleaned));
    if (words.empty()) continue;
    for (std::size_t i = 0; i + words.size() <= units.size(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k < words.size() && ok; ++k) ok = units[i + k].word == words[k];
      if (ok) {
        out.push_back({units[i].first, units[i + words.size() - 1].last});
        break;
      }
    }
  }
  return out;
}

class InferenceEngine {
 public:
  explicit InferenceEngine(EngineConfig config = {},
                           std::shared_ptr<const TriggerLexicon> lexicon = nullptr,
                           std::shared_ptr<const Morphology> morphology = nullptr)
      : config_(std::move(config)), lexicon_(std::move(lexicon)), morphology_(std::move(morphology)) {
    config_.validate();
    if (!lexicon_) lexicon_ = std::shared_ptr<const TriggerLexicon>(&TriggerLexicon::bundled(), [](const auto*) {});
    if (!morphology_) morphology_ = std::shared_ptr<const Morphology>(&Morphology::bundled(), [](const auto*) {});
  }

  const EngineConfig& config() const { return config_; }
  const TriggerLexicon& lexicon() const { return *lexicon_; }
  const Morphology& morphology() const { return *morphology_; }

  std::string lemma_of(const Token& t) const {
    if (t.lemma && !t.lemma->empty() && *t.lemma != "_") return text::to_lower(*t.lemma);
    return morphology_->lemma(t.surface, t.pos);
  }

  bool is_verb(const Token& t) const { return is_verb_tag(t.pos, config_.verb_pattern); }

  // --- future tense: aux "will" + co-governed dobj -------------------------
  std::vector<Inference> rule_future(const ParsedHeadline& h) const {
    std::vector<Inference> out;
    for (const auto& aux : h.edges) {
      if (aux.dep != "aux" || !text::iequals(aux.dependent_gloss, "will")) continue;
      for (const auto& obj : h.edges) {
        if (obj.dep != "dobj" || obj.governor != aux.governor || obj.governor_gloss != aux.governor_gloss) continue;
        const Token* verb = h.token(aux.governor);
        if (!verb) continue;
        const auto participle = morphology_->conjugate(lemma_of(*verb), VerbForm::PastParticiple);
        emit(out, InferenceKind::Presupposition, obj.dependent_gloss + " is not yet " + participle, rule_id::kFuture,
             {aux.dependent, aux.governor, obj.dependent});
      }
    }
    return sorted(std::move(out));
  }

  // --- "but": conj:but between two predicates ------------------------------
  std::vector<Inference> rule_but(const ParsedHeadline& h) const {
    std::vector<Inference> out;
    for (const auto& e : h.edges) {
      if (e.dep != "conj:but") continue;
      const Token* dep = h.token(e.dependent);
      if (!dep) continue;
      const auto gerund = morphology_->conjugate(lemma_of(*dep), VerbForm::Gerund);
      const bool neg = engine_detail::is_negated(h, e.dependent);
      std::vector<int> span{e.governor, e.dependent};
      for (const auto* cc : h.dependents(e.dependent, "cc")) span.push_back(cc->dependent);
      for (const auto* cc : h.dependents(e.governor, "cc")) span.push_back(cc->dependent);
      emit(out, InferenceKind::ConventionalImplicature,
           "being " + e.governor_gloss + (neg ? " was not expecting " : " was expecting ") + gerund, rule_id::kBut,
           std::move(span));
    }
    return sorted(std::move(out));
  }

  // --- "again" on a clause with a subject ----------------------------------
  std::vector<Inference> rule_again(const ParsedHeadline& h) const {
    using namespace engine_detail;
    std::vector<Inference> out;
    for (const auto& e : h.edges) {
      if (e.dep != "advmod" || !text::iequals(e.dependent_gloss, "again")) continue;
      const auto* subj = subject_edge(h, e.governor);
      const Token* verb = h.token(e.governor);
      if (!subj || !verb) continue;
      std::vector<int> span = phrase_tokens(h, subj->dependent);
      span.insert(span.end(), {e.governor, e.dependent});
      std::string object;
      if (const auto* obj = h.first_dependent(e.governor, "dobj")) {
        auto toks = phrase_tokens(h, obj->dependent);
        object = render(h, toks);
        span.insert(span.end(), toks.begin(), toks.end());
      }
      const auto participle = morphology_->conjugate(lemma_of(*verb), VerbForm::PastParticiple);
      emit(out, InferenceKind::Presupposition,
           join_nonempty({phrase(h, subj->dependent), "has", participle, object, "before"}), rule_id::kAgain,
           std::move(span));
    }
    return sorted(std::move(out));
  }

  // --- "further" modifying a verb ------------------------------------------
  std::vector<Inference> rule_further(const ParsedHeadline& h) const {
    std::vector<Inference> out;
    for (const auto& e : h.edges) {
      if (e.dep != "advmod" || !text::iequals(e.dependent_gloss, "further")) continue;
      const Token* verb = h.token(e.governor);
      if (!verb || !is_verb(*verb)) continue;
      std::optional<int> subject;
      if (const auto* s = engine_detail::subject_edge(h, e.governor)) {
        subject = s->dependent;
      } else {
        for (const auto& t : h.tokens)
          if (t.index < verb->index && is_noun_tag(t.pos)) subject = t.index;
      }
      if (!subject) continue;
      emit(out, InferenceKind::Presupposition,
           engine_detail::clean_surface(h.token(*subject)->surface) + " is already " + lemma_of(*verb),
           rule_id::kFurther, {*subject, e.governor, e.dependent});
    }
    return sorted(std::move(out));
  }

  // --- noun compounds ------------------------------------------------------
  std::vector<Inference> rule_noun_compound(const ParsedHeadline& h) const {
    std::vector<Inference> out;
    const std::string_view link = config_.compound_rendering == CompoundRendering::CanBe    ? " can be "
                                  : config_.compound_rendering == CompoundRendering::CanHave ? " can have "
                                                                                             : " can be/can have ";
    for (const auto& e : h.edges) {
      if (e.dep != "compound") continue;
      const Token* dep = h.token(e.dependent);
      const Token* gov = h.token(e.governor);
      if (!dep || !gov || !is_noun_tag(dep->pos) || !is_noun_tag(gov->pos)) continue;
      emit(out, InferenceKind::Presupposition,
           engine_detail::clean_surface(e.dependent_gloss) + std::string(link) +
               engine_detail::clean_surface(e.governor_gloss),
           rule_id::kCompound, {e.dependent, e.governor});
    }
    return sorted(std::move(out));
  }

  // --- main-clause past tense ----------------------------------------------
  std::vector<Inference> rule_past_tense(const ParsedHeadline& h) const {
    using namespace engine_detail;
    std::vector<Inference> out;
    for (const auto& t : h.tokens) {
      if (t.pos != "VBD") continue;
      if (const auto* up = h.head_edge(t.index)) {
        const auto base = up->base_label();
        if (base == "advcl" || base == "ccomp") continue;
      }
      const auto* subj = subject_edge(h, t.index);
      if (!subj) continue;
      std::vector<int> span{subj->dependent, t.index};
      std::vector<std::string> tail;
      for (int p : particles(h, t.index)) {
        tail.push_back(render(h, {p}));
        span.push_back(p);
      }
      if (const auto* obj = h.first_dependent(t.index, "dobj")) {
        auto toks = phrase_tokens(h, obj->dependent);
        tail.push_back(render(h, toks));
        span.insert(span.end(), toks.begin(), toks.end());
      }
      const auto participle = morphology_->conjugate(lemma_of(t), VerbForm::PastParticiple);
      emit(out, InferenceKind::Presupposition,
           join_nonempty({clean_surface(subj->dependent_gloss), "has", participle, text::join(tail, " ")}),
           rule_id::kPast, std::move(span));
    }
    return sorted(std::move(out));
  }

  // --- nominal modifier with "of" (or any nominal nmod when relaxed) --------
  std::vector<Inference> rule_nmod_of(const ParsedHeadline& h) const {
    std::vector<Inference> out;
    for (const auto& e : h.edges) {
      if (e.base_label() != "nmod") continue;
      bool of = false;
      std::vector<int> span{e.dependent, e.governor};
      for (const auto* c : h.dependents(e.dependent, "case")) {
        if (text::iequals(c->dependent_gloss, "of")) {
          of = true;
          span.push_back(c->dependent);
        }
      }
      if (!of) {
        const Token* gov = h.token(e.governor);
        if (!config_.relaxed_nmod || !gov || !is_noun_tag(gov->pos)) continue;
      }
      emit(out, InferenceKind::Presupposition,
           engine_detail::clean_surface(e.dependent_gloss) + " has " + engine_detail::clean_surface(e.governor_gloss),
           rule_id::kNmodOf, std::move(span));
    }
    return sorted(std::move(out));
  }

  // --- lexical trigger classes ---------------------------------------------
  std::vector<Inference> rule_lexical(const ParsedHeadline& h) const {
    std::vector<Inference> out;
    for (auto cls : kLexicalPredicateClasses) {
      auto part = rule_lexical_class(h, cls);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

  std::vector<Inference> rule_lexical_class(const ParsedHeadline& h, std::string_view cls) const {
    using namespace engine_detail;
    std::vector<Inference> out;
    const std::string trigger = "lexical." + std::string(cls);
    for (const auto& [anchor, site] : lexical_anchors(h, cls)) {
      std::vector<int> span = site;
      span.push_back(anchor);
      const auto subject = subject_of(h, anchor);
      const auto subject_text = subject ? phrase(h, *subject) : std::string();
      if (subject) {
        auto st = phrase_tokens(h, *subject);
        span.insert(span.end(), st.begin(), st.end());
      }
      const auto complement = complement_of(h, anchor);

      if (cls == "iterative") {
        if (complement && !subject_text.empty()) {
          const Token* c = h.token(*complement);
          span.push_back(*complement);
          const auto objects = clause_objects(h, *complement, &span);
          emit(out, InferenceKind::Presupposition,
               join_nonempty({subject_text, "had", morphology_->conjugate(lemma_of(*c), VerbForm::PastParticiple),
                              objects, "previously"}),
               trigger, span);
          continue;
        }
        if (const auto goal = goal_of(h, anchor); goal && !subject_text.empty()) {
          auto gt = phrase_tokens(h, *goal);
          span.insert(span.end(), gt.begin(), gt.end());
          emit(out, InferenceKind::Presupposition,
               join_nonempty({subject_text, "had been in", render(h, gt), "previously"}), trigger, span);
          continue;
        }
        std::string what;
        if (const auto* obj = h.first_dependent(anchor, "dobj")) {
          what = phrase(h, obj->dependent);
          span.push_back(obj->dependent);
        } else {
          what = subject_text;
        }
        if (!what.empty()) emit(out, InferenceKind::Presupposition, what + " has happened before", trigger, span);
        continue;
      }

      if (cls == "change_of_state") {
        if (!complement) continue;
        const Token* c = h.token(*complement);
        if (!c || !is_verb(*c)) continue;
        const auto csubj = subject_of(h, *complement);
        if (!csubj) continue;
        span.push_back(*complement);
        const auto aspect = cessation_verbs().count(lemma_of(*h.token(anchor))) ? "had been" : "was";
        emit(out, InferenceKind::Presupposition,
             join_nonempty({phrase(h, *csubj), aspect, morphology_->conjugate(lemma_of(*c), VerbForm::Gerund),
                            clause_objects(h, *complement, &span)}),
             trigger, span);
        continue;
      }

      if (cls == "factive" || cls == "implicative") {
        if (complement) {
          if (auto s = assert_clause(h, *complement, span)) emit(out, InferenceKind::Presupposition, *s, trigger, span);
          continue;
        }
        if (cls == "factive") {
          if (const auto* obj = h.first_dependent(anchor, "dobj")) {
            auto ot = phrase_tokens(h, obj->dependent);
            span.insert(span.end(), ot.begin(), ot.end());
            emit(out, InferenceKind::Presupposition, "There exists " + render(h, ot), trigger, span);
          }
        }
        continue;
      }

      if (cls == "judging") {
        const auto* obj = h.first_dependent(anchor, "dobj");
        if (!obj || subject_text.empty()) continue;
        auto ot = phrase_tokens(h, obj->dependent);
        span.insert(span.end(), ot.begin(), ot.end());
        emit(out, InferenceKind::Presupposition, subject_text + " thinks that " + render(h, ot) + " is bad", trigger,
             span);
      }
    }
    return sorted(std::move(out));
  }

  // --- temporal clauses ----------------------------------------------------
  std::vector<Inference> rule_temporal(const ParsedHeadline& h) const {
    using namespace engine_detail;
    std::vector<Inference> out;
    for (const auto& e : h.edges) {
      if (e.dep != "case" && e.dep != "mark") continue;
      if (!lexicon_->contains_word("temporal", e.dependent_gloss)) continue;
      const Token* gov = h.token(e.governor);
      if (!gov) continue;
      std::vector<int> span{e.dependent};
      if (is_noun_tag(gov->pos)) {
        auto toks = phrase_tokens(h, e.governor);
        span.insert(span.end(), toks.begin(), toks.end());
        emit(out, InferenceKind::Presupposition, "There was " + render(h, toks), rule_id::kTemporal, span);
      } else if (is_verb(*gov)) {
        if (auto s = assert_clause(h, e.governor, span))
          emit(out, InferenceKind::Presupposition, *s, rule_id::kTemporal, span);
      }
    }
    return sorted(std::move(out));
  }

  // --- wh-questions --------------------------------------------------------
  std::vector<Inference> rule_question(const ParsedHeadline& h, const PreprocessedHeadline& p) const {
    using namespace engine_detail;
    std::vector<Inference> out;
    if (!p.is_question()) return out;
    std::vector<const Token*> words;
    for (const auto& t : h.tokens)
      if (!is_punct_token(t)) words.push_back(&t);
    std::size_t wh = words.size();
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!words[i]->pos.empty() && words[i]->pos.front() == 'W' &&
          wh_substitutes().count(text::to_lower(words[i]->surface))) {
        wh = i;
        break;
      }
    }
    if (wh == words.size()) return out;  // yes/no question: vacuous
    const auto substitute = wh_substitutes().find(text::to_lower(words[wh]->surface))->second;
    std::vector<int> span{words[wh]->index};

    const auto* up = h.head_edge(words[wh]->index);
    const bool wh_is_subject = up && is_subject_label(up->dep);
    const bool next_is_aux = wh + 1 < words.size() &&
                             (words[wh + 1]->pos == "MD" ||
                              (is_verb_tag(words[wh + 1]->pos) &&
                               (lemma_of(*words[wh + 1]) == "be" || lemma_of(*words[wh + 1]) == "do" ||
                                lemma_of(*words[wh + 1]) == "have")));
    std::vector<std::string> result;
    auto word_of = [&](std::size_t i) { return i == wh + 1 ? expand_contraction(*words[i]) : clean_surface(words[i]->surface); };

    std::optional<int> inverted_subject;
    if (!wh_is_subject && next_is_aux && wh + 2 < words.size()) {
      // "<wh> <aux> <subject> ..." : find the subject that follows the aux.
      for (const auto& e : h.edges)
        if (is_subject_label(e.dep) && e.dependent > words[wh + 1]->index) {
          inverted_subject = e.dependent;
          break;
        }
    }
    if (inverted_subject) {
      auto subj_tokens = phrase_tokens(h, *inverted_subject);
      for (const auto* d : h.dependents(*inverted_subject, "det")) subj_tokens.push_back(d->dependent);
      std::sort(subj_tokens.begin(), subj_tokens.end());
      const std::set<int> subj_set(subj_tokens.begin(), subj_tokens.end());
      std::vector<std::string> before, after;
      for (std::size_t i = 0; i < wh; ++i) before.push_back(word_of(i));
      for (std::size_t i = wh + 2; i < words.size(); ++i)
        if (!subj_set.count(words[i]->index)) after.push_back(word_of(i));
      result = before;
      result.push_back(render(h, subj_tokens));
      result.push_back(word_of(wh + 1));
      result.insert(result.end(), after.begin(), after.end());
      result.push_back(substitute);
      span.push_back(words[wh + 1]->index);
    } else {
      for (std::size_t i = 0; i < words.size(); ++i) result.push_back(i == wh ? substitute : word_of(i));
      if (wh + 1 < words.size()) span.push_back(words[wh + 1]->index);
    }
    std::string sentence;
    for (const auto& w : result) {
      if (w.empty()) continue;
      if (!sentence.empty() && !is_clitic(w)) sentence += ' ';
      sentence += w;
    }
    emit(out, InferenceKind::Presupposition, sentence, rule_id::kQuestion, span);
    return out;
  }

  // --- more than two words in quotes ---------------------------------------
  std::vector<Inference> rule_quotes(const ParsedHeadline& h, const PreprocessedHeadline& p) const {
    using namespace engine_detail;
    std::vector<Inference> out;
    const auto located = locate_quoted_spans(h, p);
    std::optional<std::pair<int, int>> speaker;  // (verb, subject)
    for (const auto& t : h.tokens) {
      if (!is_verb_tag(t.pos) || !speech_verbs().count(lemma_of(t))) continue;
      if (const auto* s = subject_edge(h, t.index)) {
        speaker = {t.index, s->dependent};
        break;
      }
    }
    for (const auto& span : p.quoted_spans) {
      if (span.word_count() <= 2) continue;
      const auto quoted = std::string(text::trim(span.text));
      std::vector<int> tokens;
      const auto words = text::split_whitespace(text::to_lower(preprocess(span.text).cleaned));
      for (const auto& r : located) {
        // Pick the located range with the same word content.
        std::vector<std::string> rw;
        for (int i = r.first; i <= r.last; ++i)
          if (const Token* t = h.token(i); t && !is_punct_token(*t)) rw.push_back(text::to_lower(clean_surface(t->surface)));
        if (text::join(rw, " ") == text::join(words, " ") || r.last - r.first + 1 >= static_cast<int>(words.size())) {
          for (int i = r.first; i <= r.last; ++i) tokens.push_back(i);
          break;
        }
      }
      if (speaker) {
        tokens.push_back(speaker->first);
        auto st = phrase_tokens(h, speaker->second);
        tokens.insert(tokens.end(), st.begin(), st.end());
        emit(out, InferenceKind::Presupposition, phrase(h, speaker->second) + " says \"" + quoted + "\"",
             rule_id::kQuotes, tokens);
      } else {
        if (tokens.empty()) {
          if (const auto* root = h.root_edge()) tokens.push_back(root->dependent);
        }
        emit(out, InferenceKind::Presupposition, "something is said", rule_id::kQuotes, tokens);
      }
    }
    return sorted(std::move(out));
  }

  // --- explicit subject-verb-object triples --------------------------------
  std::vector<Inference> extract_triplets(const ParsedHeadline& h) const {
    using namespace engine_detail;
    std::vector<Inference> out;
    for (const auto& v : h.tokens) {
      if (!is_verb(v)) continue;
      const auto* subj = subject_edge(h, v.index);
      if (!subj) continue;
      const auto subj_tokens = phrase_tokens(h, subj->dependent);
      const auto group = verb_group(h, v.index);
      std::vector<int> base_span = subj_tokens;
      base_span.insert(base_span.end(), group.begin(), group.end());
      const std::string sv = render(h, subj_tokens) + " " + render(h, group);

      std::string object;
      std::vector<int> object_tokens;
      const auto* obj = h.first_dependent(v.index, "dobj");
      if (obj) {
        object_tokens = phrase_tokens(h, obj->dependent);
        object = render(h, object_tokens);
      }
      auto with_object = base_span;
      with_object.insert(with_object.end(), object_tokens.begin(), object_tokens.end());

      // Prepositional attachments of the verb and of its object, in order.
      std::vector<const DependencyEdge*> attachments;
      for (const auto* e : h.dependents(v.index))
        if (is_plain_nmod(*e)) attachments.push_back(e);
      if (obj)
        for (const auto* e : h.dependents(obj->dependent))
          if (is_plain_nmod(*e)) attachments.push_back(e);
      std::stable_sort(attachments.begin(), attachments.end(),
                       [](const auto* a, const auto* b) { return a->dependent < b->dependent; });

      if (obj || attachments.empty())
        emit(out, InferenceKind::ExplicitTriple, join_nonempty({sv, object}), rule_id::kTriple, with_object);
      for (const auto* e : attachments) {
        auto toks = phrase_tokens(h, e->dependent);
        auto span = with_object;
        span.insert(span.end(), toks.begin(), toks.end());
        for (const auto* c : h.dependents(e->dependent, "case")) span.push_back(c->dependent);
        emit(out, InferenceKind::ExplicitTriple,
             join_nonempty({sv, object, case_marker(h, e->dependent), render(h, toks)}), rule_id::kTriple, span);
      }
    }
    return sorted(std::move(out));
  }

  /// Output of one rule by id (empty for unknown ids).
  std::vector<Inference> run_rule(std::string_view id, const ParsedHeadline& h, const PreprocessedHeadline& p) const {
    if (id == rule_id::kTriple) return extract_triplets(h);
    if (id == rule_id::kFuture) return rule_future(h);
    if (id == rule_id::kBut) return rule_but(h);
    if (id == rule_id::kAgain) return rule_again(h);
    if (id == rule_id::kFurther) return rule_further(h);
    if (id == rule_id::kCompound) return rule_noun_compound(h);
    if (id == rule_id::kPast) return rule_past_tense(h);
    if (id == rule_id::kNmodOf) return rule_nmod_of(h);
    if (id == rule_id::kTemporal) return rule_temporal(h);
    if (id == rule_id::kQuestion) return rule_question(h, p);
    if (id == rule_id::kQuotes) return rule_quotes(h, p);
    if (text::starts_with(id, "lexical.")) return rule_lexical_class(h, id.substr(8));
    return {};
  }

  /// All enabled rules, registration order, before deduplication.
  std::vector<Inference> infer_all_raw(const ParsedHeadline& h, const PreprocessedHeadline& p) const {
    std::vector<Inference> out;
    for (const auto& id : all_rule_ids()) {
      if (!config_.enabled(id)) continue;
      auto part = run_rule(id, h, p);
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
  }

  std::vector<Inference> infer_all(const ParsedHeadline& h, const PreprocessedHeadline& p) const {
    std::vector<Inference> out;
    std::set<std::string> seen;
    for (auto& inf : infer_all_raw(h, p))
      if (seen.insert(text::to_lower(inf.text)).second) out.push_back(std::move(inf));
    return out;
  }

  std::vector<Inference> infer_all(const ParsedHeadline& h) const { return infer_all(h, preprocess(h.raw_text)); }

 private:
  static void emit(std::vector<Inference>& out, InferenceKind kind, std::string text, std::string_view trigger,
                   std::vector<int> span) {
    text = text::collapse_whitespace(text);
    span = engine_detail::normalized_span(std::move(span));
    if (text.empty() || span.empty()) return;
    out.push_back({kind, std::move(text), std::string(trigger), std::move(span)});
  }

  static std::vector<Inference> sorted(std::vector<Inference> v) {
    std::stable_sort(v.begin(), v.end(), [](const Inference& a, const Inference& b) { return a.span.front() < b.span.front(); });
    return v;
  }

  /// First clausal complement (xcomp, then ccomp) of a predicate.
  std::optional<int> complement_of(const ParsedHeadline& h, int pred) const {
    for (std::string_view label : {"xcomp", "ccomp"})
      if (const auto* e = h.first_dependent(pred, label)) return e->dependent;
    return std::nullopt;
  }

  /// The nominal reached with to/into/in ("return to Indian market").
  std::optional<int> goal_of(const ParsedHeadline& h, int pred) const {
    for (const auto* e : h.dependents(pred)) {
      if (!engine_detail::is_plain_nmod(*e)) continue;
      for (const auto* c : h.dependents(e->dependent, "case"))
        if (text::iequals(c->dependent_gloss, "to") || text::iequals(c->dependent_gloss, "into") ||
            text::iequals(c->dependent_gloss, "in"))
          return e->dependent;
    }
    return std::nullopt;
  }

  /// "<subject> <past tense of clause head> <objects>"; copular clauses
  /// become "<subject> was <predicate>".
  std::optional<std::string> assert_clause(const ParsedHeadline& h, int head, std::vector<int>& span) const {
    using namespace engine_detail;
    const Token* c = h.token(head);
    if (!c) return std::nullopt;
    const auto subj = subject_of(h, head);
    if (!subj) return std::nullopt;
    auto st = phrase_tokens(h, *subj);
    span.insert(span.end(), st.begin(), st.end());
    span.push_back(head);
    if (h.first_dependent(head, "cop")) {
      auto pt = phrase_tokens(h, head);
      return join_nonempty({render(h, st), "was", render(h, pt)});
    }
    if (!is_verb(*c)) return std::nullopt;
    return join_nonempty(
        {render(h, st), morphology_->conjugate(lemma_of(*c), VerbForm::Past), clause_objects(h, head, &span)});
  }

  /// Predicates licensed by a lexicon class: (anchor token, matched tokens).
  std::vector<std::pair<int, std::vector<int>>> lexical_anchors(const ParsedHeadline& h, std::string_view cls) const {
    std::vector<std::pair<int, std::vector<int>>> out;
    std::set<int> anchors;
    std::vector<const Token*> seq;
    for (const auto& t : h.tokens)
      if (!engine_detail::is_punct_token(t)) seq.push_back(&t);
    auto matches = [&](const Token& t, const std::string& w) {
      return lemma_of(t) == w || text::to_lower(engine_detail::clean_surface(t.surface)) == w;
    };
    auto is_predicate = [&](const Token& t) { return is_verb(t) || text::starts_with(t.pos, "JJ"); };
    for (const auto& phrase : lexicon_->entries(cls)) {
      for (std::size_t i = 0; i + phrase.size() <= seq.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < phrase.size() && ok; ++k) ok = matches(*seq[i + k], phrase[k]);
        if (!ok) continue;
        std::vector<int> site;
        std::set<int> in_window;
        for (std::size_t k = 0; k < phrase.size(); ++k) {
          site.push_back(seq[i + k]->index);
          in_window.insert(seq[i + k]->index);
        }
        // Head of the window: the token attached outside it.
        int head = site.front();
        for (int idx : site) {
          const auto* up = h.head_edge(idx);
          if (up && !in_window.count(up->governor)) {
            head = idx;
            break;
          }
        }
        if (!is_predicate(*h.token(head))) {
          const auto* up = h.head_edge(head);
          if (!up || up->governor == kRootIndex || !is_predicate(*h.token(up->governor))) continue;
          head = up->governor;
        }
        if (anchors.insert(head).second) out.emplace_back(head, std::move(site));
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  EngineConfig config_;
  std::shared_ptr<const TriggerLexicon> lexicon_;
  std::shared_ptr<const Morphology> morphology_;
};

}  // namespace hlinfer
