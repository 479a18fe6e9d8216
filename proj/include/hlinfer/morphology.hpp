// English verb lemmatization and conjugation.
//
// Irregular verbs come from a TSV table (base, past, participle). Everything
// else goes through suffix rules. For table verbs, lemma() inverts conjugate()
// exactly because the reverse maps are built from conjugate's own output.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hlinfer/bundled_data.hpp"
#include "hlinfer/errors.hpp"
#include "hlinfer/text.hpp"

namespace hlinfer {

enum class VerbForm { Base, Past, PastParticiple, Gerund, Present3sg };

inline constexpr std::array<VerbForm, 5> kAllVerbForms = {VerbForm::Base, VerbForm::Past, VerbForm::PastParticiple,
                                                          VerbForm::Gerund, VerbForm::Present3sg};

inline std::string_view to_string(VerbForm f) {
  switch (f) {
    case VerbForm::Base: return "base";
    case VerbForm::Past: return "past";
    case VerbForm::PastParticiple: return "participle";
    case VerbForm::Gerund: return "gerund";
    case VerbForm::Present3sg: return "present3sg";
  }
  return "base";
}

inline std::optional<VerbForm> parse_verb_form(std::string_view name) {
  const auto n = text::to_lower(name);
  if (n == "base") return VerbForm::Base;
  if (n == "past") return VerbForm::Past;
  if (n == "participle" || n == "past_participle" || n == "pastparticiple" || n == "pp") return VerbForm::PastParticiple;
  if (n == "gerund" || n == "ing") return VerbForm::Gerund;
  if (n == "present3sg" || n == "3sg" || n == "present") return VerbForm::Present3sg;
  return std::nullopt;
}

/// The PTB tag a form is normally written with.
inline std::string_view ptb_tag(VerbForm f) {
  switch (f) {
    case VerbForm::Base: return "VB";
    case VerbForm::Past: return "VBD";
    case VerbForm::PastParticiple: return "VBN";
    case VerbForm::Gerund: return "VBG";
    case VerbForm::Present3sg: return "VBZ";
  }
  return "VB";
}

struct IrregularEntry {
  std::string base;
  std::string past;
  std::string past_participle;
  bool operator==(const IrregularEntry&) const = default;
};

inline std::vector<IrregularEntry> parse_irregular_table(std::string_view tsv) {
  std::vector<IrregularEntry> out;
  const auto lines = text::split_lines(tsv);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto body = text::trim(lines[i]);
    if (body.empty() || body.front() == '#') continue;
    const auto cols = text::split(body, '\t');
    if (cols.size() != 3)
      throw FormatError("irregular table line " + std::to_string(i + 1) + ": expected 3 columns", std::string(body));
    IrregularEntry e{text::to_lower(text::trim(cols[0])), text::to_lower(text::trim(cols[1])),
                     text::to_lower(text::trim(cols[2]))};
    if (e.base.empty() || e.past.empty() || e.past_participle.empty())
      throw FormatError("irregular table line " + std::to_string(i + 1) + ": empty column", std::string(body));
    out.push_back(std::move(e));
  }
  return out;
}

namespace morph_detail {

inline bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Consonant at position i, treating the 'u' of "qu" as a consonant.
inline bool is_consonant_at(std::string_view w, std::size_t i) {
  const char c = w[i];
  if (c == 'u' && i > 0 && w[i - 1] == 'q') return true;
  if (c == 'y') return i == 0 || is_vowel(w[i - 1]);
  return !is_vowel(c);
}

inline bool is_vowel_at(std::string_view w, std::size_t i) { return !is_consonant_at(w, i); }

inline int syllables(std::string_view w) {
  int groups = 0;
  bool in_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool v = is_vowel_at(w, i);
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }
  return groups;
}

// consonant-vowel-consonant ending, final consonant not w/x/y.
inline bool ends_cvc(std::string_view w) {
  if (w.size() < 3) return false;
  const std::size_t n = w.size();
  const char last = w[n - 1];
  if (last == 'w' || last == 'x' || last == 'y') return false;
  return is_consonant_at(w, n - 1) && is_vowel_at(w, n - 2) && is_consonant_at(w, n - 3);
}

// Stressed-final polysyllables that double their final consonant.
inline const std::set<std::string, std::less<>>& doubling_words() {
  static const std::set<std::string, std::less<>> words = {
      "abet",     "abhor",  "acquit",   "admit",  "allot",    "annul",  "begin",    "commit", "compel",
      "concur",   "confer", "control",  "defer",  "deter",    "dispel", "embed",    "emit",   "equip",
      "excel",    "expel",  "extol",    "forbid", "forget",   "handicap", "incur",  "infer",  "kidnap",
      "occur",    "omit",   "outrun",   "outwit", "overrun",  "patrol", "permit",   "prefer", "propel",
      "rebel",    "recur",  "refer",    "regret", "repel",    "submit", "transfer", "transmit", "upset",
      "worship",  "format", "unplug",   "befit"};
  return words;
}

inline bool doubles_final(std::string_view base) {
  if (!ends_cvc(base)) return false;
  if (doubling_words().count(base)) return true;
  static constexpr std::string_view doubling_consonants = "bdgmnprt";
  return syllables(base) == 1 && doubling_consonants.find(base.back()) != std::string_view::npos;
}

inline bool ends_with_any(std::string_view w, std::initializer_list<std::string_view> suffixes) {
  for (auto s : suffixes)
    if (text::ends_with(w, s)) return true;
  return false;
}

// Stems (after stripping -ed / -ing) whose base form ends in a silent 'e'
// where the letter-shape heuristic below would say otherwise, and the reverse.
inline const std::set<std::string, std::less<>>& e_final_stems() {
  static const std::set<std::string, std::less<>> s = {
      "chang",   "arrang",  "challeng", "exchang", "rang",    "plung",   "lung",     "reveng",   "aveng",
      "infring", "imping",  "estrang",  "hing",    "scaveng", "derang",   "interchang", "rearrang",
      "expung",  "spong",   "breath",   "bath",    "sooth",   "cloth",   "loath",    "seeth",    "teeth",
      "scal",    "exhal",   "inhal",    "impal",   "aton",    "postpon", "condon",   "inton",    "enthron",
      "dethron", "welcom",  "elop",     "ignor",   "explor",  "restor",  "ador",     "deplor",   "implor",
      "underscor", "delet", "complet",  "compet",  "deplet",  "reced",   "conced",   "preced",   "imped",
      "interven", "conven", "supersed", "interfer", "persever", "adher",  "coher",    "rever",    "unit",
      "ignit",   "excit",   "invit",    "recit",   "cit",     "expedit", "incit",    "mut",
      "promot",  "devot",   "not",     "emot",    "denot",   "connot",   "mov",      "remov",
      "approv",  "disapprov", "improv", "prov",    "creat",   "recreat", "procreat"};
  return s;
}

inline const std::set<std::string, std::less<>>& no_e_stems() {
  static const std::set<std::string, std::less<>> s = {
      "focus", "bias",  "canvas", "gas",   "bus",    "fulfil", "imperil", "pencil", "stencil", "gossip",
      "pivot", "ballot", "pilot", "carrot", "parrot", "visit", "limit",   "edit",   "exhibit", "credit",
      "audit", "vomit", "inhabit", "deposit", "inherit", "solicit", "exploit", "profit", "benefit", "orbit",
      "summit", "posit", "output", "input", "panick", "mimick", "traffick", "picnick"};
  return s;
}

/// Decides whether a stem left after removing -ed/-ing (with no consonant
/// doubling to undo) had a silent final 'e'.
inline bool needs_final_e(std::string_view stem) {
  if (stem.size() < 2) return false;
  if (e_final_stems().count(stem)) return true;
  if (no_e_stems().count(stem)) return false;
  const std::size_t n = stem.size();
  const char last = stem[n - 1];
  const char prev = stem[n - 2];
  if (last == 'e' || last == 'w' || last == 'x' || last == 'y') return false;
  if (last == 'v' || last == 'u') return true;
  if (last == 'z') return prev != 'z';
  if (last == 'c') return prev != 'c';
  if (last == 'g') return prev != 'n' && prev != 'g';  // manage, judge, merge vs bring
  if (last == 's') return prev != 's';                  // release, collapse vs pass
  if (last == 'l' && !is_vowel(prev)) return prev != 'l' && prev != 'r' && prev != 'w';
  if (last == 'h' || (last == 'k' && prev == 'c')) return false;
  if (!is_consonant_at(stem, n - 1) || !is_vowel_at(stem, n - 2)) return false;
  // Single vowel + consonant from here on.
  if (n >= 3 && is_vowel_at(stem, n - 3)) return false;  // vowel pair: rain, need, treat
  if (syllables(stem) == 1) return true;  // hop/hope, vot/vote, us/use
  switch (prev) {
    case 'e':
      return false;  // open, happen, enter
    case 'i':
      return last != 't';  // divide, combine vs visit, limit
    case 'a':
      return last != 'l';  // create, persuade vs signal, equal
    case 'o':
      return last != 'n' && last != 'm' && last != 'p' && last != 'r';  // promote, explode vs abandon, develop
    case 'u':
      return true;  // execute, include, consume
    default:
      return false;
  }
}

inline std::string undo_or_restore(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1])) {
    std::string single = stem.substr(0, n - 1);
    if (doubles_final(single)) return single;
    return stem;
  }
  if (needs_final_e(stem)) return stem + "e";
  return stem;
}

inline const std::set<std::string, std::less<>>& modal_verbs() {
  static const std::set<std::string, std::less<>> m = {"will", "would", "can",  "could", "shall",
                                                       "should", "may", "might", "must", "ought"};
  return m;
}

}  // namespace morph_detail

inline bool is_modal(std::string_view word) { return morph_detail::modal_verbs().count(text::to_lower(word)) > 0; }

/// Regular-rule conjugation (no table).
inline std::string conjugate_regular(std::string_view base_in, VerbForm form) {
  using namespace morph_detail;
  const std::string base = text::to_lower(base_in);
  if (base.empty()) return base;
  const std::size_t n = base.size();
  const bool consonant_y = n >= 2 && base[n - 1] == 'y' && !is_vowel(base[n - 2]);
  switch (form) {
    case VerbForm::Base:
      return base;
    case VerbForm::Past:
    case VerbForm::PastParticiple:
      if (base.back() == 'e') return base + "d";
      if (consonant_y) return base.substr(0, n - 1) + "ied";
      if (doubles_final(base)) return base + base.back() + "ed";
      return base + "ed";
    case VerbForm::Gerund:
      if (ends_with_any(base, {"ie"}) && n > 2) return base.substr(0, n - 2) + "ying";
      if (base.back() == 'e' && n > 2 && !ends_with_any(base, {"ee", "ye", "oe"})) return base.substr(0, n - 1) + "ing";
      if (doubles_final(base)) return base + base.back() + "ing";
      return base + "ing";
    case VerbForm::Present3sg:
      if (ends_with_any(base, {"s", "x", "z", "ch", "sh"})) return base + "es";
      if (n >= 2 && base.back() == 'o' && !is_vowel(base[n - 2])) return base + "es";
      if (consonant_y) return base.substr(0, n - 1) + "ies";
      return base + "s";
  }
  return base;
}

/// Suffix-rule lemmatization for a verb form tagged `pos`.
inline std::string lemma_regular(std::string_view surface, std::string_view pos) {
  using namespace morph_detail;
  const std::string w = text::to_lower(surface);
  const std::size_t n = w.size();
  if (pos == "VBD" || pos == "VBN") {
    if (n > 3 && text::ends_with(w, "ied")) {
      const auto stem = w.substr(0, n - 3);
      return stem.size() <= 1 ? stem + "ie" : stem + "y";
    }
    if (n > 3 && text::ends_with(w, "eed")) return w.substr(0, n - 1);
    if (n > 3 && text::ends_with(w, "ed")) return undo_or_restore(w.substr(0, n - 2));
    return w;
  }
  if (pos == "VBG") {
    if (n > 4 && text::ends_with(w, "ying")) {
      const auto stem = w.substr(0, n - 4);
      if (stem.size() <= 1) return stem + "ie";
      return stem + "y";
    }
    if (n > 4 && text::ends_with(w, "ing")) {
      const auto stem = w.substr(0, n - 3);
      if (stem.back() == 'e') return stem;  // agreeing, seeing
      return undo_or_restore(stem);
    }
    return w;
  }
  if (pos == "VBZ") {
    if (n > 3 && text::ends_with(w, "ies")) {
      const auto stem = w.substr(0, n - 3);
      return stem.size() <= 1 ? stem + "ie" : stem + "y";
    }
    if (n > 3 && ends_with_any(w, {"sses", "shes", "ches", "xes", "zzes"})) return w.substr(0, n - 2);
    if (n > 3 && text::ends_with(w, "oes") && !is_vowel(w[n - 4])) return w.substr(0, n - 2);
    if (n > 2 && w.back() == 's' && w[n - 2] != 's') return w.substr(0, n - 1);
    return w;
  }
  return w;
}

/// Irregular table plus suffix rules. Immutable after construction.
class Morphology {
 public:
  explicit Morphology(std::vector<IrregularEntry> table) : table_(std::move(table)) {
    for (const auto& e : table_) {
      by_base_[e.base] = e;
      for (VerbForm f : {VerbForm::Past, VerbForm::PastParticiple, VerbForm::Gerund, VerbForm::Present3sg})
        reverse_[static_cast<int>(f)].emplace(conjugate(e.base, f), e.base);
    }
    for (std::string_view be : {"am", "are", "is", "was", "were", "'s", "'re", "'m", "ai"})
      be_forms_.insert(std::string(be));
  }

  static Morphology from_tsv(std::string_view tsv) { return Morphology(parse_irregular_table(tsv)); }

  /// The table shipped in data/irregular_verbs.tsv.
  static const Morphology& bundled() {
    static const Morphology m = from_tsv(bundled::kIrregularVerbs);
    return m;
  }

  const std::vector<IrregularEntry>& table() const { return table_; }

  bool is_irregular(std::string_view base) const { return by_base_.count(text::to_lower(base)) > 0; }

  std::string conjugate(std::string_view base_in, VerbForm form) const {
    const std::string base = text::to_lower(base_in);
    if (base.empty() || is_modal(base)) return base;
    if (auto it = by_base_.find(base); it != by_base_.end()) {
      if (form == VerbForm::Past) return it->second.past;
      if (form == VerbForm::PastParticiple) return it->second.past_participle;
    }
    if (base == "be") {
      if (form == VerbForm::Gerund) return "being";
      if (form == VerbForm::Present3sg) return "is";
    }
    if (base == "have" && form == VerbForm::Present3sg) return "has";
    return conjugate_regular(base, form);
  }

  std::string lemma(std::string_view surface, std::string_view pos) const {
    const std::string w = text::to_lower(surface);
    if (pos.empty() || pos.front() != 'V') return w;
    if (be_forms_.count(w)) return "be";
    if (w == "'ve") return "have";
    if (pos == "VB" || pos == "VBP") return w;
    auto lookup = [&](VerbForm f) -> std::optional<std::string> {
      const auto& m = reverse_[static_cast<int>(f)];
      if (auto it = m.find(w); it != m.end()) return it->second;
      return std::nullopt;
    };
    std::vector<VerbForm> order;
    if (pos == "VBD") order = {VerbForm::Past, VerbForm::PastParticiple};
    else if (pos == "VBN") order = {VerbForm::PastParticiple, VerbForm::Past};
    else if (pos == "VBG") order = {VerbForm::Gerund};
    else if (pos == "VBZ") order = {VerbForm::Present3sg};
    for (VerbForm f : order)
      if (auto hit = lookup(f)) return *hit;
    if (by_base_.count(w)) return w;
    return lemma_regular(w, pos);
  }

 private:
  std::vector<IrregularEntry> table_;
  std::map<std::string, IrregularEntry, std::less<>> by_base_;
  std::array<std::map<std::string, std::string, std::less<>>, 5> reverse_;
  std::set<std::string, std::less<>> be_forms_;
};

}  // namespace hlinfer
