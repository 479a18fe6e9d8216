#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

using namespace hlinfer;
using namespace hlinfer::testing;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("hlinfer_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(std::string_view name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

cli::InferOptions figures_options(const std::string& out) {
  cli::InferOptions o;
  o.dataset = fixture("figures/dataset.txt");
  o.parses = fixture("figures/parses.jsonl");
  o.out = out;
  return o;
}

}  // namespace

TEST(InferenceJsonl, RoundTrip) {
  const std::vector<InferenceRecord> records = {
      {"UK economy to slow further", {{InferenceKind::Presupposition, "UK economy is already slow", "further", {2, 4, 5}}}},
      {"Empty", {}}};
  const auto doc = render_inference_jsonl(records);
  EXPECT_EQ(std::count(doc.begin(), doc.end(), '\n'), 2);
  const auto back = parse_inference_jsonl(doc);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].headline, records[0].headline);
  EXPECT_EQ(back[0].inferences, records[0].inferences);
  EXPECT_TRUE(back[1].inferences.empty());
  EXPECT_EQ(render_inference_jsonl(back), doc);
}

TEST(InferenceJsonl, KindSymbols) {
  const std::vector<InferenceRecord> recs = {{"h", {{InferenceKind::Presupposition, "x", "past", {1}}}}};
  const auto doc = render_inference_jsonl(recs);
  EXPECT_EQ(nlohmann::json::parse(doc)["inferences"][0]["kind"], ">>");
}

TEST(InferenceJsonl, ErrorsNameTheLine) {
  try {
    parse_inference_jsonl("{\"headline\":\"a\",\"inferences\":[]}\n{not json\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_inference_jsonl("{\"inferences\":[]}\n"), FormatError);
}

TEST(Labels, Parse) {
  const auto l = parse_labels_jsonl(
      "{\"headline\":\"h\",\"incorrect\":[\"a\"],\"matched\":[{\"computed\":\"b\",\"gold\":\"c\"}]}\n");
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l[0].incorrect, std::vector<std::string>{"a"});
  ASSERT_EQ(l[0].matched.size(), 1u);
  EXPECT_EQ(l[0].matched[0].first, "b");
  EXPECT_EQ(l[0].matched[0].second, "c");
}

TEST(RunConfigFile, ParsesAllKeys) {
  const auto cfg = parse_run_config(
      "# comment\nrules = future, but\nverb_pattern = strict\ncompound_rendering = can_have\n"
      "relaxed_nmod = yes\nlexicon = /tmp/x.tsv\nmatch_mode = jaccard\njaccard_threshold = 0.75\n");
  EXPECT_EQ(cfg.engine.enabled_rules, (std::vector<std::string>{"future", "but"}));
  EXPECT_EQ(cfg.engine.verb_pattern, VerbPattern::Strict);
  EXPECT_EQ(cfg.engine.compound_rendering, CompoundRendering::CanHave);
  EXPECT_TRUE(cfg.engine.relaxed_nmod);
  EXPECT_EQ(cfg.lexicon_path, std::optional<std::string>("/tmp/x.tsv"));
  EXPECT_EQ(cfg.match.mode, MatchMode::TokenJaccard);
  EXPECT_DOUBLE_EQ(cfg.match.jaccard_threshold, 0.75);
}

TEST(RunConfigFile, Errors) {
  for (auto bad : {"nonsense\n", "colour = blue\n", "rules = future, bogus\n", "relaxed_nmod = maybe\n",
                   "jaccard_threshold = 2\n", "jaccard_threshold = 0.5x\n", "verb_pattern = loose\n"}) {
    EXPECT_THROW(parse_run_config(bad), FormatError) << bad;
  }
  try {
    parse_run_config("rules = all\ncolour = blue\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ConfigHash, DeterministicAndSensitive) {
  const auto& lex = TriggerLexicon::bundled();
  EngineConfig a;
  EXPECT_EQ(config_hash(a, lex), config_hash(a, lex));
  EXPECT_EQ(config_hash(a, lex).size(), 16u);
  EngineConfig b = a;
  b.relaxed_nmod = true;
  EXPECT_NE(config_hash(a, lex), config_hash(b, lex));
  EngineConfig c = a;
  c.enabled_rules = {"future"};
  EXPECT_NE(config_hash(a, lex), config_hash(c, lex));
  const auto other = TriggerLexicon::from_tsv(lex.serialize() + "iterative\tyet again\n");
  EXPECT_NE(config_hash(a, lex), config_hash(a, other));
}

TEST_F(TempDir, LexiconEnvironmentDirectory) {
  write_file(path("lexicon.tsv"), "temporal\tbefore\n");
  ::setenv(kLexiconDirEnv, dir_.c_str(), 1);
  const auto env_lex = load_lexicon(std::nullopt);
  ::unsetenv(kLexiconDirEnv);
  EXPECT_EQ(env_lex->serialize(), TriggerLexicon::from_tsv("temporal\tbefore\n").serialize());
  EXPECT_EQ(load_lexicon(std::nullopt)->serialize(), TriggerLexicon::bundled().serialize());
  // An explicit path wins over the environment.
  write_file(path("explicit.tsv"), "factive\tregret\n");
  ::setenv(kLexiconDirEnv, dir_.c_str(), 1);
  EXPECT_EQ(load_lexicon(path("explicit.tsv"))->serialize(), TriggerLexicon::from_tsv("factive\tregret\n").serialize());
  ::unsetenv(kLexiconDirEnv);
}

TEST_F(TempDir, InferFiguresWritesRecordsAndManifest) {
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_infer(figures_options(path("inf.jsonl")), out, err), 0) << err.str();
  const auto records = parse_inference_jsonl(read_file(path("inf.jsonl")));
  ASSERT_EQ(records.size(), 7u);
  for (const auto& r : records) EXPECT_FALSE(r.inferences.empty()) << r.headline;
  const auto manifest = nlohmann::json::parse(read_file(path("inf.jsonl.manifest.json")));
  EXPECT_EQ(manifest["headline_count"], 7);
  EXPECT_EQ(manifest["version"], std::string(kToolVersion));
  EXPECT_EQ(manifest["config_hash"], config_hash(EngineConfig{}, TriggerLexicon::bundled()));
  EXPECT_TRUE(manifest["skipped"].empty());
  EXPECT_EQ(manifest["per_headline"].size(), 7u);
}

TEST_F(TempDir, InferIsByteIdenticalAcrossRuns) {
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_infer(figures_options(path("a.jsonl")), out, err), 0);
  ASSERT_EQ(cli::cmd_infer(figures_options(path("b.jsonl")), out, err), 0);
  EXPECT_EQ(read_file(path("a.jsonl")), read_file(path("b.jsonl")));
}

TEST_F(TempDir, InferEmptyDataset) {
  write_file(path("empty.txt"), "");
  auto o = figures_options(path("out.jsonl"));
  o.dataset = path("empty.txt");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_infer(o, out, err), 0) << err.str();
  EXPECT_EQ(read_file(path("out.jsonl")), "");
}

TEST_F(TempDir, InferMissingParsesFile) {
  auto o = figures_options(path("out.jsonl"));
  o.parses = path("does_not_exist.jsonl");
  std::ostringstream out, err;
  EXPECT_NE(cli::cmd_infer(o, out, err), 0);
  EXPECT_NE(err.str().find("does_not_exist.jsonl"), std::string::npos);
}

TEST_F(TempDir, InferSkipsUnparsedHeadlines) {
  write_file(path("ds.txt"), read_file(fixture("figures/dataset.txt")) +
                                 "A headline nobody parsed [source: Reuters January 1, 2018]\n");
  auto o = figures_options(path("out.jsonl"));
  o.dataset = path("ds.txt");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_infer(o, out, err), 0);
  EXPECT_NE(err.str().find("A headline nobody parsed"), std::string::npos);
  EXPECT_EQ(parse_inference_jsonl(read_file(path("out.jsonl"))).size(), 7u);
  EXPECT_EQ(nlohmann::json::parse(read_file(path("out.jsonl.manifest.json")))["skipped"].size(), 1u);
  o.strict = true;
  EXPECT_NE(cli::cmd_infer(o, out, err), 0);
}

TEST_F(TempDir, InferRuleOverride) {
  auto o = figures_options(path("out.jsonl"));
  o.rules = "future";
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_infer(o, out, err), 0);
  for (const auto& r : parse_inference_jsonl(read_file(path("out.jsonl"))))
    for (const auto& i : r.inferences) EXPECT_EQ(i.trigger, "future");
  o.rules = "no_such_rule";
  EXPECT_NE(cli::cmd_infer(o, out, err), 0);
}

TEST_F(TempDir, InferFromConllu) {
  cli::InferOptions o;
  o.dataset = fixture("conllu/dataset.txt");
  o.parses = fixture("conllu/rescue.conllu");
  o.out = path("out.jsonl");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_infer(o, out, err), 0) << err.str();
  EXPECT_EQ(parse_inference_jsonl(read_file(path("out.jsonl"))).size(), 2u);
}

TEST_F(TempDir, EvalTable2) {
  cli::EvalOptions o;
  o.inferences = fixture("table2/computed.jsonl");
  o.gold = fixture("table2/gold.txt");
  o.labels = fixture("table2/labels.jsonl");
  o.out = path("report.json");
  o.tsv = path("triggers.tsv");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_eval(o, out, err), 0) << err.str();
  const auto report = nlohmann::json::parse(read_file(path("report.json")));
  ASSERT_EQ(report["headlines"].size(), 3u);
  EXPECT_NEAR(report["headlines"][2]["percent_correct"].get<double>(), 16.7, 0.1);
  EXPECT_NE(out.str().find("40.0\t0.0"), std::string::npos);
  EXPECT_EQ(read_file(path("triggers.tsv")).rfind("trigger\taccurate\tinaccurate\tmissing\n", 0), 0u);
}

TEST_F(TempDir, EvalZeroGoldBlocks) {
  write_file(path("gold.txt"), "# nothing\n");
  cli::EvalOptions o;
  o.inferences = fixture("table2/computed.jsonl");
  o.gold = path("gold.txt");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_eval(o, out, err), 0) << err.str();
}

TEST_F(TempDir, EvalMalformedGold) {
  write_file(path("gold.txt"), "Headline\n>> never closed\n");
  cli::EvalOptions o;
  o.inferences = fixture("table2/computed.jsonl");
  o.gold = path("gold.txt");
  std::ostringstream out, err;
  EXPECT_NE(cli::cmd_eval(o, out, err), 0);
  EXPECT_NE(err.str().find("error"), std::string::npos);
}

TEST_F(TempDir, EvalMissingHeadlineCountsAsAllMissing) {
  write_file(path("gold.txt"), "Unseen headline\n>> something\n||\n");
  cli::EvalOptions o;
  o.inferences = fixture("table2/computed.jsonl");
  o.gold = path("gold.txt");
  o.out = path("r.json");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_eval(o, out, err), 0);
  EXPECT_NE(err.str().find("Unseen headline"), std::string::npos);
  const auto report = nlohmann::json::parse(read_file(path("r.json")));
  EXPECT_DOUBLE_EQ(report["headlines"][0]["percent_correct"].get<double>(), 0.0);
}

TEST(Eval, RejectsBadMatchMode) {
  cli::EvalOptions o;
  o.inferences = fixture("table2/computed.jsonl");
  o.gold = fixture("table2/gold.txt");
  o.match_mode = "fuzzy";
  std::ostringstream out, err;
  EXPECT_NE(cli::cmd_eval(o, out, err), 0);
}

TEST(Morph, Command) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_morph("go", "past", out, err), 0);
  EXPECT_EQ(out.str(), "went\n");
  EXPECT_EQ(cli::cmd_morph("go", "pluperfect", out, err), 2);
}

TEST(Stats, Command) {
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_stats(fixture("figures/dataset.txt"), out, err), 0);
  EXPECT_EQ(out.str().rfind("headlines\t7\n", 0), 0u);
  std::ostringstream out2;
  ASSERT_EQ(cli::cmd_stats(fixture("conllu/dataset.txt"), out2, err), 0);
  EXPECT_EQ(out2.str().rfind("headlines\t2\n", 0), 0u);
}
