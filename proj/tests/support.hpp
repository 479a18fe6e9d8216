#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "hlinfer/hlinfer.hpp"

namespace hlinfer::testing {

inline std::string fixture(std::string_view rel) { return std::string(HLINFER_FIXTURE_DIR) + "/" + std::string(rel); }

inline std::vector<ParsedHeadline> load_fixture_parses(std::string_view rel) {
  return cli::load_parses(read_file(fixture(rel)));
}

inline ParsedHeadline fixture_parse(std::string_view rel, std::string_view id) {
  for (auto& h : load_fixture_parses(rel))
    if (h.headline_id == id) return h;
  throw std::runtime_error("no parse '" + std::string(id) + "' in " + std::string(rel));
}

inline std::vector<std::string> normalized_texts(const std::vector<Inference>& v) {
  std::vector<std::string> out;
  for (const auto& i : v) out.push_back(normalize(i.text));
  return out;
}

inline bool contains_normalized(const std::vector<Inference>& v, std::string_view expected) {
  const auto texts = normalized_texts(v);
  return std::find(texts.begin(), texts.end(), normalize(expected)) != texts.end();
}

inline std::vector<Inference> run(const InferenceEngine& engine, const ParsedHeadline& h) {
  return engine.infer_all(h, preprocess(h.raw_text));
}

}  // namespace hlinfer::testing
