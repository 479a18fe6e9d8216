// Trigger word lists, keyed by trigger class.

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hlinfer/bundled_data.hpp"
#include "hlinfer/errors.hpp"
#include "hlinfer/text.hpp"

namespace hlinfer {

inline constexpr std::array<std::string_view, 6> kTriggerClasses = {
    "iterative", "change_of_state", "factive", "implicative", "judging", "temporal"};

/// The classes whose entries are predicates (everything except temporal).
inline constexpr std::array<std::string_view, 5> kLexicalPredicateClasses = {
    "iterative", "change_of_state", "factive", "implicative", "judging"};

class TriggerLexicon {
 public:
  using Phrase = std::vector<std::string>;  // lowercase words

  TriggerLexicon() {
    for (auto c : kTriggerClasses) classes_[std::string(c)];
  }

  static TriggerLexicon from_tsv(std::string_view tsv) {
    TriggerLexicon lex;
    const auto lines = text::split_lines(tsv);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto body = text::trim(lines[i]);
      if (body.empty() || body.front() == '#') continue;
      const auto cols = text::split(body, '\t');
      if (cols.size() != 2)
        throw FormatError("lexicon line " + std::to_string(i + 1) + ": expected class<TAB>entry", std::string(body));
      const auto cls = std::string(text::trim(cols[0]));
      auto words = text::split_whitespace(text::to_lower(cols[1]));
      if (cls.empty() || words.empty())
        throw FormatError("lexicon line " + std::to_string(i + 1) + ": empty field", std::string(body));
      // "to come back" and "come back" are the same trigger.
      if (words.size() > 1 && words.front() == "to") words.erase(words.begin());
      lex.add(cls, std::move(words));
    }
    return lex;
  }

  /// The lexicon shipped in data/lexicon.tsv.
  static const TriggerLexicon& bundled() {
    static const TriggerLexicon lex = from_tsv(bundled::kLexicon);
    return lex;
  }

  void add(const std::string& cls, Phrase phrase) {
    auto& entries = classes_[cls];
    if (std::find(entries.begin(), entries.end(), phrase) == entries.end()) entries.push_back(std::move(phrase));
  }

  const std::vector<Phrase>& entries(std::string_view cls) const {
    static const std::vector<Phrase> empty;
    auto it = classes_.find(std::string(cls));
    return it == classes_.end() ? empty : it->second;
  }

  bool contains_word(std::string_view cls, std::string_view word) const {
    const auto w = text::to_lower(word);
    for (const auto& p : entries(cls))
      if (p.size() == 1 && p.front() == w) return true;
    return false;
  }

  const std::map<std::string, std::vector<Phrase>>& classes() const { return classes_; }

  /// Canonical text form: one "class<TAB>entry" line per entry, classes sorted.
  std::string serialize() const {
    std::string out;
    for (const auto& [cls, entries] : classes_)
      for (const auto& p : entries) out += cls + "\t" + text::join(p, " ") + "\n";
    return out;
  }

 private:
  std::map<std::string, std::vector<Phrase>> classes_;
};

}  // namespace hlinfer
