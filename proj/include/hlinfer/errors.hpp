// Exception types thrown by the ingestion and file-format readers.

#pragma once

#include <stdexcept>
#include <string>

namespace hlinfer {

/// Malformed input text (bad column count, non-integer head, missing key).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input whose contents contradict each other (gloss/index mismatch,
/// broken tree).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset, gold, lexicon, table or config file that does not follow its format.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::string raw = {}) : std::runtime_error(what), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

}  // namespace hlinfer
