// Dataset lines, headline preprocessing and the gold annotation format.

#pragma once

#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "hlinfer/errors.hpp"
#include "hlinfer/text.hpp"

namespace hlinfer {

// "<headline> [source: <source> <timestamp>]"
struct HeadlineRecord {
  std::string text;
  std::string source;
  std::string timestamp_raw;
  std::size_t line_number = 0;

  bool operator==(const HeadlineRecord&) const = default;
};

struct QuotedSpan {
  int start_word = 0;  // word offsets into PreprocessedHeadline::cleaned, [start, end)
  int end_word = 0;
  std::string text;  // verbatim text between the quote characters

  int word_count() const { return end_word - start_word; }
  bool operator==(const QuotedSpan&) const = default;
};

struct PreprocessedHeadline {
  std::string original;
  std::string cleaned;
  std::vector<QuotedSpan> quoted_spans;
  int removed_chars = 0;

  bool is_question() const { return original.find('?') != std::string::npos; }
  bool operator==(const PreprocessedHeadline&) const = default;
};

struct GoldInference {
  std::string text;
  std::optional<std::string> trigger;
  bool operator==(const GoldInference&) const = default;
};

struct GoldAnnotation {
  std::string headline;
  std::vector<GoldInference> inferences;
  bool operator==(const GoldAnnotation&) const = default;
};

// ---------------------------------------------------------------------------
// Dataset

namespace detail {

inline bool starts_timestamp(const std::vector<std::string>& words, std::size_t i) {
  static const std::regex month(
      R"(^(jan|feb|mar|apr|may|jun|jul|aug|sep|sept|oct|nov|dec)(uary|ruary|ch|il|e|y|ust|tember|ober|ember)?[.,]?$)",
      std::regex::icase);
  static const std::regex numeric_date(R"(^\d{1,4}[-/.]\d{1,2}([-/.]\d{1,4})?.*$)");
  static const std::regex day(R"(^\d{1,2}(st|nd|rd|th)?,?$)", std::regex::icase);
  const auto& w = words[i];
  if (std::regex_match(w, month) || std::regex_match(w, numeric_date)) return true;
  return std::regex_match(w, day) && i + 1 < words.size() && std::regex_match(words[i + 1], month);
}

}  // namespace detail

inline HeadlineRecord parse_dataset_line(std::string_view line) {
  static constexpr std::string_view marker = "[source:";
  const auto open = line.rfind(marker);
  if (open == std::string_view::npos) throw FormatError("missing '[source:' bracket", std::string(line));
  auto rest = line.substr(open + marker.size());
  const auto close = rest.rfind(']');
  if (close == std::string_view::npos) throw FormatError("unterminated '[source:' bracket", std::string(line));
  rest = rest.substr(0, close);

  HeadlineRecord r;
  r.text = std::string(text::trim(line.substr(0, open)));
  if (r.text.empty()) throw FormatError("empty headline", std::string(line));
  const auto words = text::split_whitespace(rest);
  std::size_t cut = words.size();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0 && detail::starts_timestamp(words, i)) {
      cut = i;
      break;
    }
  }
  r.source = text::join(std::vector<std::string>(words.begin(), words.begin() + cut), " ");
  r.timestamp_raw = text::join(std::vector<std::string>(words.begin() + cut, words.end()), " ");
  return r;
}

/// One record per non-blank, non-'#' line. Errors carry the line number.
inline std::vector<HeadlineRecord> parse_dataset(std::string_view document) {
  std::vector<HeadlineRecord> out;
  const auto lines = text::split_lines(document);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto body = text::trim(lines[i]);
    if (body.empty() || body.front() == '#') continue;
    try {
      auto r = parse_dataset_line(body);
      r.line_number = i + 1;
      out.push_back(std::move(r));
    } catch (const FormatError& err) {
      throw FormatError("line " + std::to_string(i + 1) + ": " + err.what(), err.raw());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Preprocessing

namespace detail {

inline int count_words(const std::vector<char32_t>& cps, std::size_t end) {
  int words = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < end && i < cps.size(); ++i) {
    const bool space = text::is_space(cps[i]);
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

}  // namespace detail

/// Strips the headline punctuation set, turning dashes into word breaks and
/// keeping word-internal apostrophes. Double-quoted spans are recorded first.
inline PreprocessedHeadline preprocess(std::string_view raw) {
  PreprocessedHeadline p;
  p.original = std::string(raw);
  const auto cps = text::decode(raw);

  std::vector<std::size_t> quotes;
  for (std::size_t i = 0; i < cps.size(); ++i)
    if (text::is_double_quote(cps[i])) quotes.push_back(i);

  std::vector<char32_t> out;
  std::vector<std::size_t> out_offset_at(cps.size() + 1, 0);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    out_offset_at[i] = out.size();
    const char32_t c = cps[i];
    if (text::is_dash(c)) {
      out.push_back(U' ');
      ++p.removed_chars;
    } else if (text::is_single_quote(c)) {
      const bool inside_word =
          i > 0 && i + 1 < cps.size() && text::is_word_char(cps[i - 1]) && text::is_word_char(cps[i + 1]);
      if (inside_word) {
        out.push_back(c);
      } else {
        ++p.removed_chars;
      }
    } else if (text::is_punctuation(c)) {
      ++p.removed_chars;
    } else {
      out.push_back(c);
    }
  }
  out_offset_at[cps.size()] = out.size();

  for (std::size_t q = 0; q + 1 < quotes.size(); q += 2) {
    const auto open = quotes[q];
    const auto close = quotes[q + 1];
    const auto open_off = out_offset_at[open];
    const auto close_off = out_offset_at[close];
    QuotedSpan span;
    span.start_word = detail::count_words(out, open_off);
    // A quote glued to a preceding word does not start a new word.
    if (open_off > 0 && !text::is_space(out[open_off - 1]) && open_off < out.size() && !text::is_space(out[open_off]))
      --span.start_word;
    span.end_word = detail::count_words(out, close_off);
    if (span.end_word < span.start_word) span.end_word = span.start_word;
    span.text = text::encode(std::vector<char32_t>(cps.begin() + open + 1, cps.begin() + close));
    p.quoted_spans.push_back(std::move(span));
  }
  p.cleaned = text::collapse_whitespace(text::encode(out));
  return p;
}

// ---------------------------------------------------------------------------
// Gold annotations

/// Parses ">>" / "||" annotation blocks. A trailing " @<trigger>" on an
/// inference line tags it with a trigger id.
inline std::vector<GoldAnnotation> parse_gold(std::string_view document) {
  static const std::regex trigger_suffix(R"(^(.*\S)\s+@([A-Za-z_][A-Za-z0-9_.:-]*)$)");
  std::vector<GoldAnnotation> out;
  std::optional<GoldAnnotation> open;
  std::size_t open_line = 0;
  const auto lines = text::split_lines(document);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string body(text::trim(lines[i]));
    const auto where = "line " + std::to_string(i + 1) + ": ";
    if (body.empty() || body.front() == '#') continue;
    if (body == "||") {
      if (!open) throw FormatError(where + "'||' without a headline", body);
      out.push_back(std::move(*open));
      open.reset();
      continue;
    }
    if (text::starts_with(body, ">>")) {
      if (!open) throw FormatError(where + "'>>' inference before any headline", body);
      std::string inf(text::trim(std::string_view(body).substr(2)));
      GoldInference g;
      std::smatch m;
      if (std::regex_match(inf, m, trigger_suffix)) {
        g.text = m[1].str();
        g.trigger = m[2].str();
      } else {
        g.text = inf;
      }
      if (g.text.empty()) throw FormatError(where + "empty inference", body);
      open->inferences.push_back(std::move(g));
      continue;
    }
    if (open)
      throw FormatError(where + "headline '" + open->headline + "' (line " + std::to_string(open_line) +
                            ") is not terminated by '||'",
                        body);
    open = GoldAnnotation{body, {}};
    open_line = i + 1;
  }
  if (open)
    throw FormatError("headline '" + open->headline + "' (line " + std::to_string(open_line) +
                      ") is not terminated by '||'");
  return out;
}

inline std::string render_gold(const std::vector<GoldAnnotation>& annotations) {
  std::string out;
  for (const auto& a : annotations) {
    out += a.headline + "\n";
    for (const auto& inf : a.inferences) {
      out += ">> " + inf.text;
      if (inf.trigger) out += " @" + *inf.trigger;
      out += "\n";
    }
    out += "||\n";
  }
  return out;
}

}  // namespace hlinfer
