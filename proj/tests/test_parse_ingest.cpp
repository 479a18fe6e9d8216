#include <gtest/gtest.h>

#include "support.hpp"

using namespace hlinfer;
using namespace hlinfer::testing;

namespace {

bool has_edge(const ParsedHeadline& h, std::string_view dep, std::string_view gov, std::string_view dependent) {
  return std::any_of(h.edges.begin(), h.edges.end(), [&](const DependencyEdge& e) {
    return e.dep == dep && e.governor_gloss == gov && e.dependent_gloss == dependent;
  });
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

const char* kDivideJson = R"({"tokens":[{"index":1,"word":"Rescue","pos":"NN"},{"index":2,"word":"rules","pos":"NNS"},
 {"index":3,"word":"will","pos":"MD"},{"index":4,"word":"divide","pos":"VB"},{"index":5,"word":"Britain","pos":"NNP"}],
 "dependencies":[{"dep":"compound","governor":2,"governorGloss":"rules","dependent":1,"dependentGloss":"Rescue"},
 {"dep":"nsubj","governor":4,"governorGloss":"divide","dependent":2,"dependentGloss":"rules"},
 {"dep":"aux","governor":4,"governorGloss":"divide","dependent":3,"dependentGloss":"will"},
 {"dep":"ROOT","governor":0,"governorGloss":"ROOT","dependent":4,"dependentGloss":"divide"},
 {"dep":"dobj","governor":4,"governorGloss":"divide","dependent":5,"dependentGloss":"Britain"}]})";

}  // namespace

TEST(Conllu, EmptyDocument) { EXPECT_TRUE(parse_conllu("").empty()); }

TEST(Conllu, RescueRulesTuples) {
  const auto hs = load_fixture_parses("conllu/rescue.conllu");
  ASSERT_EQ(hs.size(), 2u);
  const auto& h = hs[0];
  EXPECT_EQ(h.headline_id, "1");
  EXPECT_EQ(h.raw_text, "Rescue rules by Bank of England will divide Britain");
  EXPECT_EQ(h.tokens.size(), 9u);
  EXPECT_TRUE(has_edge(h, "nmod", "rules", "Bank"));
  EXPECT_TRUE(has_edge(h, "case", "England", "of"));
  EXPECT_TRUE(has_edge(h, "nmod", "Bank", "England"));
  EXPECT_TRUE(has_edge(h, "aux", "divide", "will"));
  EXPECT_TRUE(has_edge(h, "dobj", "divide", "Britain"));  // "obj" in the file
  EXPECT_EQ(h.token(1)->lemma, std::optional<std::string>("rescue"));
}

TEST(Conllu, UposFallbackWhenXposMissing) {
  const auto h = load_fixture_parses("conllu/rescue.conllu").at(1);
  EXPECT_TRUE(is_noun_tag(h.token(1)->pos));
  EXPECT_TRUE(is_verb_tag(h.token(4)->pos));
  EXPECT_EQ(h.token(2)->pos, "IN");
  EXPECT_FALSE(h.token(1)->lemma.has_value());
}

TEST(Conllu, HeadOutOfRange) {
  const std::string doc =
      "1\tA\t_\tNOUN\tNN\t_\t0\troot\t_\t_\n2\tB\t_\tNOUN\tNN\t_\t1\tdep\t_\t_\n3\tC\t_\tNOUN\tNN\t_\t1\tdep\t_\t_\n"
      "4\tD\t_\tNOUN\tNN\t_\t1\tdep\t_\t_\n5\tE\t_\tNOUN\tNN\t_\t99\tdep\t_\t_\n";
  try {
    parse_conllu(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(Conllu, WrongColumnCountNamesLine) {
  const std::string doc = "# text = x\n1\tA\t_\tNOUN\tNN\t_\t0\troot\t_\t_\n2\tB\tNOUN\n";
  try {
    parse_conllu(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Conllu, NonIntegerHead) {
  EXPECT_THROW(parse_conllu("1\tA\t_\tNOUN\tNN\t_\tx\troot\t_\t_\n"), ParseError);
}

TEST(Conllu, SkipsMultiwordAndEmptyNodes) {
  const std::string doc =
      "1-2\tIt's\t_\t_\t_\t_\t_\t_\t_\t_\n1\tIt\tit\tPRON\tPRP\t_\t3\tnsubj\t_\t_\n2\t's\tbe\tAUX\tVBZ\t_\t3\tcop\t_\t_\n"
      "2.1\tx\t_\t_\t_\t_\t_\t_\t_\t_\n3\tready\tready\tADJ\tJJ\t_\t0\troot\t_\t_\n";
  const auto hs = parse_conllu(doc);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_EQ(hs[0].tokens.size(), 3u);
}

TEST(Conllu, ConsistencyProblemsBecomeParseErrors) {
  // Two roots.
  EXPECT_THROW(parse_conllu("1\tA\t_\tNOUN\tNN\t_\t0\troot\t_\t_\n2\tB\t_\tNOUN\tNN\t_\t0\troot\t_\t_\n"), ParseError);
}

TEST(Conllu, RoundTrip) {
  const auto hs = load_fixture_parses("conllu/rescue.conllu");
  const auto again = parse_conllu(render_conllu(hs));
  ASSERT_EQ(again.size(), hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    EXPECT_EQ(again[i].edges, hs[i].edges);
    EXPECT_EQ(again[i].tokens, hs[i].tokens);
  }
}

TEST(StanfordJson, TupleFieldsPreserved) {
  const auto h = parse_stanford_json(std::string_view(kDivideJson));
  const auto found = edges_with(h, "dobj");
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].dep, "dobj");
  EXPECT_EQ(found[0].governor, 4);
  EXPECT_EQ(found[0].governor_gloss, "divide");
  EXPECT_EQ(found[0].dependent, 5);
  EXPECT_EQ(found[0].dependent_gloss, "Britain");
  EXPECT_EQ(h.root_edge()->dep, "root");  // ROOT normalized
}

TEST(StanfordJson, GlossMismatch) {
  std::string doc = kDivideJson;
  doc.replace(doc.find("\"word\":\"divide\""), 15, "\"word\":\"divides\"");
  EXPECT_THROW(parse_stanford_json(std::string_view(doc)), ConsistencyError);
}

TEST(StanfordJson, NoEdgesMeansNoRoot) {
  EXPECT_THROW(parse_stanford_json(std::string_view(R"({"tokens":[{"index":1,"word":"A","pos":"NN"}],"dependencies":[]})")),
               ConsistencyError);
}

TEST(StanfordJson, MissingKeyIsNamed) {
  try {
    parse_stanford_json(std::string_view(R"({"tokens":[{"index":1,"word":"A","pos":"NN"}],"dependencies":[{"dep":"root","governor":0,"dependent":1,"dependentGloss":"A"}]})"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("governorGloss"), std::string::npos) << e.what();
  }
}

TEST(StanfordJson, RoundTrip) {
  for (const auto& h : load_fixture_parses("figures/parses.jsonl")) {
    const auto back = parse_stanford_json(render_stanford_json(h), h.headline_id);
    EXPECT_EQ(back.tokens, h.tokens);
    EXPECT_EQ(back.edges, h.edges);
  }
}

TEST(StanfordJson, DocumentShapes) {
  const std::string one = kDivideJson;
  EXPECT_EQ(parse_stanford_document(one).size(), 1u);
  EXPECT_EQ(parse_stanford_document("[" + one + "," + one + "]").size(), 2u);
  EXPECT_EQ(load_fixture_parses("figures/parses.jsonl").size(), 7u);
}

TEST(Validate, Invariants) {
  const std::vector<Token> toks = {{1, "A", std::nullopt, "NN"}, {2, "B", std::nullopt, "NN"}};
  EXPECT_NO_THROW(make_headline("x", "", toks, {{"root", 0, "ROOT", 1, "A"}, {"dep", 1, "A", 2, "B"}}));
  // self loop
  EXPECT_THROW(make_headline("x", "", toks, {{"root", 0, "ROOT", 1, "A"}, {"dep", 2, "B", 2, "B"}}), ConsistencyError);
  // token with two heads
  EXPECT_THROW(make_headline("x", "", toks, {{"root", 0, "ROOT", 1, "A"}, {"dep", 1, "A", 2, "B"}, {"x", 1, "A", 2, "B"}}),
               ConsistencyError);
  // cycle detached from the root
  const std::vector<Token> three = {{1, "A", std::nullopt, "NN"}, {2, "B", std::nullopt, "NN"}, {3, "C", std::nullopt, "NN"}};
  EXPECT_THROW(make_headline("x", "", three, {{"root", 0, "ROOT", 1, "A"}, {"dep", 3, "C", 2, "B"}, {"dep", 2, "B", 3, "C"}}),
               ConsistencyError);
  // empty POS, duplicate index
  EXPECT_THROW(make_headline("x", "", {{1, "A", std::nullopt, ""}}, {{"root", 0, "ROOT", 1, "A"}}), ConsistencyError);
  EXPECT_THROW(make_headline("x", "", {{1, "A", std::nullopt, "NN"}, {1, "A", std::nullopt, "NN"}}, {{"root", 0, "ROOT", 1, "A"}}),
               ConsistencyError);
}

TEST(NormalizeLabels, Table) {
  std::vector<DependencyEdge> e = {{"obj", 1, "divide", 2, "Britain"}, {"nsubj", 1, "divide", 3, "rules"},
                                   {"obl:tmod", 1, "divide", 4, "today"}, {"obl", 1, "divide", 5, "x"},
                                   {"weird:label", 1, "divide", 6, "y"}};
  const auto n = normalize_labels(e);
  EXPECT_EQ(n[0].dep, "dobj");
  EXPECT_EQ(n[1].dep, "nsubj");
  EXPECT_EQ(n[2].dep, "nmod:tmod");
  EXPECT_EQ(n[3].dep, "nmod");
  EXPECT_EQ(n[4].dep, "weird:label");
}

TEST(NormalizeLabels, ButConjunction) {
  std::vector<DependencyEdge> e = {{"conj", 5, "ready", 9, "come"}, {"cc", 9, "come", 6, "but"}};
  EXPECT_EQ(normalize_labels(e)[0].dep, "conj:but");
  std::vector<DependencyEdge> sd = {{"conj", 5, "ready", 9, "come"}, {"cc", 5, "ready", 6, "but"}};
  EXPECT_EQ(normalize_labels(sd)[0].dep, "conj:but");
  std::vector<DependencyEdge> plain = {{"conj", 5, "ready", 9, "come"}, {"cc", 9, "come", 6, "and"}};
  EXPECT_EQ(normalize_labels(plain)[0].dep, "conj");
}

TEST(NormalizeLabels, Idempotent) {
  for (const auto& h : load_fixture_parses("appendix/parses.jsonl")) EXPECT_EQ(normalize_labels(h.edges), h.edges);
}

TEST(Queries, VerbsOf) {
  const auto fig1 = fixture_parse("figures/parses.jsonl", "1");
  EXPECT_EQ(surfaces(verbs_of(fig1, VerbPattern::Relaxed)), std::vector<std::string>{"broadcast"});
  // The literal two-or-more-character pattern still admits "VB".
  EXPECT_EQ(surfaces(verbs_of(fig1, VerbPattern::Strict)), std::vector<std::string>{"broadcast"});
  EXPECT_FALSE(is_verb_tag("V", VerbPattern::Strict));
  EXPECT_TRUE(is_verb_tag("V", VerbPattern::Relaxed));
  EXPECT_FALSE(is_verb_tag("MD"));
  EXPECT_EQ(surfaces(verbs_of(fixture_parse("figures/parses.jsonl", "3"))), std::vector<std::string>{"rejects"});
  EXPECT_TRUE(verbs_of(fixture_parse("rules/parses.jsonl", "verbless")).empty());
}

TEST(Queries, NounsOf) {
  EXPECT_EQ(surfaces(nouns_of(fixture_parse("figures/parses.jsonl", "7"))),
            (std::vector<std::string>{"Bank", "England", "rescue"}));
  EXPECT_EQ(surfaces(nouns_of(fixture_parse("figures/parses.jsonl", "4"))), (std::vector<std::string>{"UK", "economy"}));
  EXPECT_TRUE(nouns_of(ParsedHeadline{}).empty());
}

TEST(Queries, VerbAndNounTagsAreDisjoint) {
  for (auto tag : {"NN", "NNS", "NNP", "NNPS", "PRP", "PRP$", "POS", "PDT", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD",
                   "JJ", "RB", "IN", "DT", "CC", "WP", "WRB"})
    EXPECT_FALSE(is_verb_tag(tag) && is_noun_tag(tag)) << tag;
}

TEST(Queries, EdgesWith) {
  const auto fig1 = fixture_parse("figures/parses.jsonl", "1");
  const auto aux = edges_with(fig1, "aux", std::nullopt, "WILL");
  ASSERT_EQ(aux.size(), 1u);
  EXPECT_EQ(aux[0].governor_gloss, "broadcast");
  EXPECT_TRUE(edges_with(fig1, "xcomp").empty());
  EXPECT_EQ(edges_with(fixture_parse("figures/parses.jsonl", "7"), "nmod", "Bank", "England").size(), 1u);
}

TEST(Headline, TreeAccessors) {
  const auto h = fixture_parse("figures/parses.jsonl", "6");
  EXPECT_EQ(h.root_edge()->dependent_gloss, "released");
  EXPECT_EQ(h.head_edge(8)->dep, "advcl");
  EXPECT_EQ(h.dependents(8).size(), 3u);
  EXPECT_EQ(h.first_dependent(3, "dobj")->dependent_gloss, "video");
}
