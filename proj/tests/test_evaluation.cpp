#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace hlinfer;
using namespace hlinfer::testing;

namespace {

std::vector<HeadlineEvaluation> evaluate_fixture(std::string_view dir, const MatchConfig& cfg = {}) {
  const auto gold = parse_gold(read_file(fixture(std::string(dir) + "/gold.txt")));
  const auto computed = parse_inference_jsonl(read_file(fixture(std::string(dir) + "/computed.jsonl")));
  const auto labels = parse_labels_jsonl(read_file(fixture(std::string(dir) + "/labels.jsonl")));
  std::vector<HeadlineEvaluation> out;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    EXPECT_EQ(computed[i].headline, gold[i].headline);
    EXPECT_EQ(labels[i].headline, gold[i].headline);
    out.push_back(evaluate_headline(computed[i].inferences, gold[i], cfg, labels[i]));
  }
  return out;
}

const TriggerScore& find(const std::vector<TriggerScore>& v, std::string_view id) {
  for (const auto& t : v)
    if (t.trigger == id) return t;
  throw std::runtime_error("no trigger " + std::string(id));
}

}  // namespace

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize("Olympic can be /can have ban"), "olympic can-have ban");
  EXPECT_EQ(normalize("England has Bank."), "england has bank");
  EXPECT_EQ(normalize(""), "");
  EXPECT_EQ(normalize("Brexit can be/ can have campaign"), normalize("Brexit can have campaign"));
  EXPECT_EQ(normalize("X can be Y"), normalize("X can have Y"));
  EXPECT_EQ(normalize("Olympics - being ready"), "olympics being ready");
  EXPECT_EQ(normalize("Merkel says \"not the breakthrough\""), "merkel says not the breakthrough");
  EXPECT_EQ(normalize("up/down"), "up down");
}

TEST(Match, SharedInference) {
  const auto a = align({"Olympics has medals"}, {"Olympics has medals"});
  EXPECT_EQ(a.matched(), 1u);
}

TEST(Match, Disjoint) {
  const auto a = align({"a b", "c"}, {"d", "e f"});
  EXPECT_EQ(a.matched(), 0u);
  EXPECT_EQ(a.unmatched_computed.size(), 2u);
  EXPECT_EQ(a.unmatched_gold.size(), 2u);
}

TEST(Match, CompoundRenderingVariants) {
  EXPECT_EQ(align({"Brexit can be/ can have campaign"}, {"Brexit can have campaign"}).matched(), 1u);
}

TEST(Match, ExactPairsTakeGoldOrderThenComputedOrder) {
  const auto a = align({"x", "x", "y"}, {"x", "y", "x"});
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 2}, {2, 1}}));
}

TEST(Match, JaccardMode) {
  MatchConfig cfg{MatchMode::TokenJaccard, 0.6};
  // {economy is already slow} vs {the economy is already slow}: 4/5 = 0.8.
  EXPECT_DOUBLE_EQ(token_jaccard("economy is already slow", "the economy is already slow"), 0.8);
  EXPECT_EQ(align({"economy is already slow"}, {"the economy is already slow"}, cfg).matched(), 1u);
  EXPECT_EQ(align({"economy is already slow"}, {"the economy is already slow"}).matched(), 0u);
  cfg.jaccard_threshold = 0.9;
  EXPECT_EQ(align({"economy is already slow"}, {"the economy is already slow"}, cfg).matched(), 0u);
}

TEST(Match, JaccardPrefersHighestScore) {
  MatchConfig cfg{MatchMode::TokenJaccard, 0.3};
  const auto a = align({"a b c d", "a b c"}, {"a b c e"}, cfg);
  ASSERT_EQ(a.matched(), 1u);
  // J(abcd, abce) = 3/5, J(abc, abce) = 3/4.
  EXPECT_EQ(a.pairs[0], (std::pair<std::size_t, std::size_t>{1, 0}));
}

TEST(Match, ThresholdValidated) {
  EXPECT_THROW(align({}, {}, MatchConfig{MatchMode::TokenJaccard, 1.5}), std::invalid_argument);
}

TEST(Match, JudgedPairsFirst) {
  const auto a = align({"Korea can have deadline"}, {"North Korea has deadline"}, {},
                       {{"Korea can have deadline", "North Korea has deadline"}});
  EXPECT_EQ(a.matched(), 1u);
  // A judged pair that names texts absent from the lists is ignored.
  EXPECT_EQ(align({"a"}, {"b"}, {}, {{"zzz", "b"}}).matched(), 0u);
}

TEST(ScoreHeadline, CountExamples) {
  auto s = score_counts(5, 3, 2, 0);
  EXPECT_NEAR(s.percent_correct, 40.0, 1e-9);
  EXPECT_NEAR(s.percent_incorrect, 0.0, 1e-9);
  s = score_counts(6, 3, 1, 1);
  EXPECT_NEAR(round1(s.percent_correct), 16.7, 1e-9);
  EXPECT_NEAR(round1(s.percent_incorrect), 33.3, 1e-9);
  s = score_counts(4, 3, 3, 0);
  EXPECT_NEAR(s.percent_correct, 75.0, 1e-9);
}

TEST(ScoreHeadline, EdgeCases) {
  EXPECT_DOUBLE_EQ(score_counts(0, 0, 0, 0).percent_correct, 100.0);
  EXPECT_DOUBLE_EQ(score_counts(0, 2, 0, 2).percent_correct, 0.0);
  EXPECT_DOUBLE_EQ(score_counts(3, 0, 0, 0).percent_incorrect, 0.0);
}

TEST(ScoreHeadline, AutomaticModeCountsUnmatched) {
  const std::vector<std::string> computed = {"a", "b", "c"};
  const auto a = align(computed, {"a", "z"});
  const auto s = score_headline(a, computed);
  EXPECT_EQ(s.incorrect_count, 2u);
  EXPECT_NEAR(s.percent_incorrect, 200.0 / 3.0, 1e-9);
  const auto labeled = score_headline(a, computed, std::vector<std::string>{"c"});
  EXPECT_EQ(labeled.incorrect_count, 1u);
}

TEST(HeadlineScoreFixture, WithHumanJudgments) {
  const auto evs = evaluate_fixture("table2");
  ASSERT_EQ(evs.size(), 3u);
  const double expected[3][2] = {{40.0, 0.0}, {75.0, 0.0}, {16.7, 33.3}};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(evs[i].score.percent_correct, expected[i][0], 0.1) << evs[i].headline;
    EXPECT_NEAR(evs[i].score.percent_incorrect, expected[i][1], 0.1) << evs[i].headline;
  }
  // Row 3 is matched automatically, without a judged pair.
  EXPECT_EQ(evs[2].alignment.matched(), 1u);
}

TEST(TriggerScoreFixture, SyntheticCorpusHandCounts) {
  const auto scores = score_by_trigger(evaluate_fixture("table1"));
  struct Row {
    const char* id;
    double acc, inacc;
    std::optional<double> missing;
  };
  const Row rows[] = {
      {"but", 900.0 / 13, 0.0, 400.0 / 13},  {"further", 100.0, 0.0, 0.0},    {"again", 75.0, 25.0, 25.0},
      {"future", 80.0, 0.0, 20.0},           {"compound", 50.0, 100.0 / 3, 25.0}, {"triple", 100.0 / 3, 0.0, std::nullopt},
  };
  ASSERT_EQ(scores.size(), std::size(rows));
  for (const auto& r : rows) {
    const auto& s = find(scores, r.id);
    EXPECT_NEAR(s.percent_accurate, r.acc, 1e-9) << r.id;
    EXPECT_NEAR(s.percent_inaccurate, r.inacc, 1e-9) << r.id;
    ASSERT_EQ(s.percent_missing.has_value(), r.missing.has_value()) << r.id;
    if (r.missing) {
      EXPECT_NEAR(*s.percent_missing, *r.missing, 1e-9) << r.id;
    }
  }
  const auto& but = find(scores, "but");
  EXPECT_DOUBLE_EQ(round1(but.percent_accurate), 69.2);
  EXPECT_DOUBLE_EQ(round1(but.percent_inaccurate), 0.0);
  EXPECT_DOUBLE_EQ(round1(*but.percent_missing), 30.8);
}

TEST(TriggerScoreFixture, BruteForceOracle) {
  // Count every (computed, gold) pair directly; texts in the fixture are unique.
  const auto gold = parse_gold(read_file(fixture("table1/gold.txt")));
  const auto computed = parse_inference_jsonl(read_file(fixture("table1/computed.jsonl")));
  const auto labels = parse_labels_jsonl(read_file(fixture("table1/labels.jsonl")));
  std::map<std::string, std::array<int, 5>> counts;  // computed, matched, incorrect, tagged, missing
  for (std::size_t h = 0; h < gold.size(); ++h) {
    for (const auto& c : computed[h].inferences) {
      auto& row = counts[c.trigger];
      ++row[0];
      for (const auto& g : gold[h].inferences)
        if (normalize(g.text) == normalize(c.text)) ++row[1];
      for (const auto& l : labels[h].incorrect)
        if (l == c.text) ++row[2];
    }
    for (const auto& g : gold[h].inferences) {
      if (!g.trigger) continue;
      auto& row = counts[*g.trigger];
      ++row[3];
      bool hit = false;
      for (const auto& c : computed[h].inferences) hit = hit || normalize(c.text) == normalize(g.text);
      if (!hit) ++row[4];
    }
  }
  for (const auto& s : score_by_trigger(evaluate_fixture("table1"))) {
    const auto& row = counts.at(s.trigger);
    EXPECT_EQ(static_cast<int>(s.computed_count), row[0]) << s.trigger;
    EXPECT_EQ(static_cast<int>(s.matched_count), row[1]) << s.trigger;
    EXPECT_EQ(static_cast<int>(s.incorrect_count), row[2]) << s.trigger;
    EXPECT_EQ(static_cast<int>(s.gold_tagged), row[3]) << s.trigger;
    EXPECT_EQ(static_cast<int>(s.gold_missing), row[4]) << s.trigger;
  }
}

TEST(ScoreByTrigger, OmitsAbsentTriggersAndOrdersByRegistration) {
  GoldAnnotation g{"h", {{"x", std::string("zeta")}}};
  std::vector<Inference> c = {{InferenceKind::Presupposition, "y", "compound", {1}},
                              {InferenceKind::ExplicitTriple, "x", "triple", {1}}};
  const auto scores = score_by_trigger({evaluate_headline(c, g)});
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_EQ(scores[0].trigger, "triple");
  EXPECT_EQ(scores[1].trigger, "compound");
  EXPECT_EQ(scores[2].trigger, "zeta");
  EXPECT_EQ(scores[2].computed_count, 0u);
  EXPECT_DOUBLE_EQ(*scores[2].percent_missing, 0.0);
  EXPECT_FALSE(scores[0].percent_missing);
}
