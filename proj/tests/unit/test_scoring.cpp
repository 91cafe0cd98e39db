#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "bwslex/design.hpp"
#include "bwslex/errors.hpp"
#include "bwslex/scoring.hpp"
#include "bwslex/simulation.hpp"
#include "test_support.hpp"

using namespace bwslex;

namespace {

TupleItem tuple(const std::string& id, std::array<WordId, 4> words) {
  TupleItem t;
  t.tuple_id = id;
  t.emotion = Emotion::joy;
  t.words = std::move(words);
  return t;
}

StudyDesign tiny_design() {
  StudyDesign d;
  d.words = {"a", "b", "c", "d", "e"};
  EmotionBlock block;
  block.emotion = Emotion::joy;
  block.tuples.push_back(tuple("t1", {"a", "b", "c", "d"}));
  block.tuples.push_back(tuple("t2", {"a", "b", "c", "e"}));
  auto check = tuple("chk", {"door", "happiness", "elbow", "depression"});
  check.is_attention_check = true;
  check.check_key = CheckKey{"happiness", "depression"};
  block.tuples.push_back(check);
  d.blocks.push_back(block);
  return d;
}

Judgment judge(const std::string& who, const std::string& tid, const std::string& best,
               const std::string& worst, int tick = 0) {
  return Judgment{who, tid, Emotion::joy, best, worst, Timestamp{std::chrono::seconds{1640995200 + tick}}};
}

}  // namespace

TEST(Timestamp, FormatAndParse) {
  const Timestamp t{std::chrono::seconds{1640995200 + 3661}};
  EXPECT_EQ(format_timestamp(t), "2022-01-01T01:01:01Z");
  EXPECT_EQ(parse_timestamp("2022-01-01T01:01:01Z"), t);
  EXPECT_EQ(parse_timestamp("2022-01-01T01:01:01+00:00"), t);
  EXPECT_FALSE(parse_timestamp("2022-13-01T01:01:01Z").has_value());
  EXPECT_FALSE(parse_timestamp("2022-01-01 01:01:01").has_value());
}

TEST(Aggregate, CountingFormula) {
  const auto d = tiny_design();
  const std::vector<Judgment> js{judge("x", "t1", "a", "d"), judge("y", "t1", "a", "c"),
                                 judge("x", "t2", "b", "a"),
                                 judge("x", "chk", "happiness", "depression")};
  const auto s = aggregate(js, d, Emotion::joy);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_EQ(s.at("a").n_judgments, 3);
  EXPECT_DOUBLE_EQ(s.at("a").raw, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.at("a").scaled, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.at("b").raw, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.at("c").raw, -1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.at("d").raw, -0.5);
  EXPECT_EQ(s.at("e").n_judgments, 1);
  EXPECT_DOUBLE_EQ(s.at("e").scaled, 0.5);
  EXPECT_EQ(s.count("happiness"), 0u);
  EXPECT_TRUE(aggregate(js, d, Emotion::fear).empty());
}

TEST(Aggregate, UnknownTupleRejected) {
  const auto d = tiny_design();
  EXPECT_THROW(aggregate({judge("x", "nope", "a", "b")}, d, Emotion::joy), ValidationError);
}

TEST(Filter, FailedCheckDiscardsAnnotator) {
  const auto d = tiny_design();
  const std::vector<Judgment> js{judge("x", "t1", "a", "d"), judge("x", "chk", "happiness", "depression"),
                                 judge("y", "t1", "b", "c"), judge("y", "chk", "depression", "happiness"),
                                 judge("z", "t2", "e", "a")};
  const auto r = filter_annotators(js, d);
  EXPECT_EQ(r.discarded, std::vector<std::string>{"y"});
  EXPECT_EQ(r.unchecked, std::vector<std::string>{"z"});
  ASSERT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.kept[0].annotator_id, "x");
  EXPECT_EQ(r.kept[1].annotator_id, "z");
}

TEST(Filter, InvalidJudgmentRejected) {
  const auto d = tiny_design();
  EXPECT_THROW(filter_annotators({judge("x", "t1", "a", "a")}, d), ValidationError);
  EXPECT_THROW(filter_annotators({judge("x", "t1", "a", "e")}, d), ValidationError);
}

TEST(JudgmentCsv, RoundTripAndCheckColumn) {
  const auto d = tiny_design();
  std::vector<Judgment> js{judge("y", "t2", "b", "a", 5), judge("x", "chk", "happiness", "depression", 2),
                           judge("x", "t1", "a", "d", 1)};
  std::ostringstream out;
  write_judgments(out, js);
  std::istringstream in(out.str());
  EXPECT_EQ(read_judgments(in), js);

  std::ostringstream with;
  write_judgments(with, js, &d);
  const std::string text = with.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "annotator_id,tuple_id,emotion,best,worst,timestamp_iso8601,is_attention_check");
  EXPECT_NE(text.find("x,chk,joy,happiness,depression,2022-01-01T00:00:02Z,1"), std::string::npos);

  sort_judgments(js);
  EXPECT_EQ(js[0].tuple_id, "chk");
  EXPECT_EQ(js[1].tuple_id, "t1");
}

TEST(JudgmentCsv, Errors) {
  std::istringstream bad_header("who,what\n");
  EXPECT_THROW(read_judgments(bad_header), ParseError);
  std::istringstream bad_ts(
      "annotator_id,tuple_id,emotion,best,worst,timestamp_iso8601\nx,t1,joy,a,b,yesterday\n");
  try {
    read_judgments(bad_ts, "log.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad_emotion(
      "annotator_id,tuple_id,emotion,best,worst,timestamp_iso8601\nx,t1,trust,a,b,2022-01-01T00:00:00Z\n");
  EXPECT_THROW(read_judgments(bad_emotion), ParseError);
}

TEST(ScoresToLexicon, ExportsFixtureFormat) {
  const auto& lex = testing_support::fixture_lexicon();
  std::vector<WordId> words;
  for (const auto& e : lex.nonsense()) {
    words.push_back(e.word);
    if (words.size() == 10) break;
  }
  const auto d = generate_design(words, {kEmotions.begin(), kEmotions.end()}, 3);
  const auto js = simulate_judgments(d, truth_from_lexicon(lex), make_annotators(0.0, 1));
  const auto table = aggregate_all(filter_annotators(js, d).kept, d);
  const auto out = scores_to_lexicon(table, lex);
  ASSERT_EQ(out.size(), 10u);
  for (const auto& e : out) {
    const LexEntry* ref = lex.find(e.word);
    ASSERT_NE(ref, nullptr);
    EXPECT_EQ(e.pron, ref->pron);
    EXPECT_EQ(e.id, ref->id);
    for (Emotion em : kEmotions) EXPECT_EQ(e[em], table.find(e.word, em)->scaled);
  }
}

TEST(SplitHalf, DeterministicAndHighForNoiseless) {
  const auto& lex = testing_support::fixture_lexicon();
  std::vector<WordId> words;
  for (const auto& e : lex.nonsense()) {
    words.push_back(e.word);
    if (words.size() == 30) break;
  }
  const auto d = generate_design(words, {Emotion::joy, Emotion::fear}, 7);
  const auto js = simulate_judgments(d, truth_from_lexicon(lex), make_annotators(0.0, 2));
  const auto a = split_half_reliability_all(js, d, 50, 9);
  const auto b = split_half_reliability_all(js, d, 50, 9);
  ASSERT_EQ(a.slices.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.slices[i].spearman, b.slices[i].spearman);
    EXPECT_GT(a.slices[i].spearman, 0.9);
    EXPECT_EQ(a.slices[i].iterations + a.slices[i].skipped, 50);
  }
  // input order does not matter
  auto shuffled = js;
  std::reverse(shuffled.begin(), shuffled.end());
  EXPECT_EQ(split_half_reliability_all(shuffled, d, 50, 9).slices[0].spearman, a.slices[0].spearman);
  EXPECT_THROW(split_half_reliability(js, d, Emotion::joy, 0, 1), ValidationError);
}

TEST(SplitHalf, TooFewSharedWordsIsDegenerate) {
  const auto d = tiny_design();
  // a single judgment always lands in bin A, leaving bin B empty
  const std::vector<Judgment> js{judge("x", "t1", "a", "d")};
  EXPECT_THROW(split_half_reliability(js, d, Emotion::joy, 10, 1), DegenerateInput);
}

TEST(CorrelateBins, NeedsThreeSharedWords) {
  const auto d = tiny_design();
  EXPECT_FALSE(correlate_bins({judge("x", "t1", "a", "d")}, {}, d, Emotion::joy).has_value());
  const auto c =
      correlate_bins({judge("x", "t1", "a", "d")}, {judge("y", "t2", "a", "e")}, d, Emotion::joy);
  ASSERT_TRUE(c.has_value());
  // shared a, b, c: (1, .5, .5) vs (1, .5, .5)
  EXPECT_NEAR(c->pearson, 1.0, 1e-12);
}
