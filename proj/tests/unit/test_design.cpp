#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "bwslex/design.hpp"
#include "bwslex/errors.hpp"

using namespace bwslex;

namespace {

std::vector<WordId> make_words(std::size_t n) {
  std::vector<WordId> w;
  for (std::size_t i = 0; i < n; ++i) w.push_back("w" + std::to_string(i));
  return w;
}

const std::vector<Emotion> kJoy{Emotion::joy};
const std::vector<Emotion> kAll{kEmotions.begin(), kEmotions.end()};

}  // namespace

TEST(Design, InvariantsHoldForN40) {
  const auto d = generate_design(make_words(40), kAll, 11);
  EXPECT_NO_THROW(validate_design(d));
  ASSERT_EQ(d.blocks.size(), 6u);
  for (const auto& block : d.blocks) {
    std::map<WordId, int> occ;
    std::set<std::array<WordId, 4>> seen;
    std::size_t regular = 0, checks = 0;
    for (const auto& t : block.tuples) {
      if (t.is_attention_check) {
        ++checks;
        continue;
      }
      ++regular;
      EXPECT_TRUE(seen.insert(t.words).second);
      std::set<WordId> distinct(t.words.begin(), t.words.end());
      EXPECT_EQ(distinct.size(), 4u);
      for (const auto& w : t.words) ++occ[w];
    }
    EXPECT_EQ(regular, 80u);
    EXPECT_EQ(checks, 1u);
    EXPECT_EQ(occ.size(), 40u);
    for (const auto& [w, c] : occ) EXPECT_EQ(c, kOccurrencesPerWord) << w;
  }
}

TEST(Design, SmallestN) {
  const auto d = generate_design(make_words(5), kJoy, 3);
  EXPECT_NO_THROW(validate_design(d));
  EXPECT_EQ(d.blocks[0].tuples.size(), 11u);
}

TEST(Design, RejectsTooFewWords) {
  try {
    generate_design(make_words(4), kJoy, 1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("N must be >= 5"), std::string::npos);
  }
  EXPECT_THROW(generate_design({"a", "b", "c", "d", "a"}, kJoy, 1), ValidationError);
}

TEST(Design, DeterministicUnderSeed) {
  const auto words = make_words(12);
  EXPECT_EQ(generate_design(words, kAll, 99), generate_design(words, kAll, 99));
  EXPECT_NE(generate_design(words, kAll, 99), generate_design(words, kAll, 100));
}

TEST(Design, ManySeedsAndSizes) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 5 + (seed * 7) % 30;
    const auto d = generate_design(make_words(n), kJoy, seed);
    EXPECT_NO_THROW(validate_design(d)) << "n=" << n << " seed=" << seed;
  }
}

TEST(Design, AttentionCheckKey) {
  const auto d = generate_design(make_words(8), kAll, 5);
  for (const auto& block : d.blocks) {
    const auto& check = block.tuples.back();
    ASSERT_TRUE(check.is_attention_check);
    ASSERT_TRUE(check.check_key.has_value());
    const auto& cw = default_check_words(block.emotion);
    EXPECT_EQ(check.check_key->best_expected, cw.related);
    EXPECT_EQ(check.check_key->worst_expected, cw.opposite);
    EXPECT_TRUE(check.contains(cw.neutral[0]));
    EXPECT_TRUE(check.contains(cw.neutral[1]));
  }
  const auto& joy = default_check_words(Emotion::joy);
  EXPECT_EQ(joy.related, "happiness");
  EXPECT_EQ(joy.opposite, "depression");
}

TEST(Design, NoChecksOption) {
  DesignOptions opts;
  opts.attention_checks = false;
  const auto d = generate_design(make_words(6), kJoy, 1, opts);
  for (const auto& t : d.blocks[0].tuples) EXPECT_FALSE(t.is_attention_check);
  EXPECT_EQ(d.blocks[0].tuples.size(), 12u);
}

TEST(Design, ValidateRejectsBrokenDesigns) {
  auto d = generate_design(make_words(10), kJoy, 2);
  auto seven = d;
  // replace one occurrence of w0 with w1 where w1 is not already present
  for (auto& t : seven.blocks[0].tuples) {
    if (t.is_attention_check || !t.contains("w0") || t.contains("w1")) continue;
    for (auto& w : t.words)
      if (w == "w0") w = "w1";
    break;
  }
  EXPECT_THROW(validate_design(seven), ValidationError);

  auto dup = d;
  dup.blocks[0].tuples[1].words = dup.blocks[0].tuples[0].words;
  EXPECT_THROW(validate_design(dup), ValidationError);

  auto within = d;
  within.blocks[0].tuples[0].words[1] = within.blocks[0].tuples[0].words[0];
  EXPECT_THROW(validate_design(within), ValidationError);

  auto nokey = d;
  nokey.blocks[0].tuples.back().check_key.reset();
  EXPECT_THROW(validate_design(nokey), ValidationError);
}

TEST(Design, JsonRoundTrip) {
  const auto d = generate_design(make_words(9), kAll, 42);
  const auto text = design_to_json(d);
  EXPECT_EQ(design_from_json(text), d);
  EXPECT_EQ(text.find("is_attention_check") != std::string::npos, true);
  EXPECT_THROW(design_from_json("{not json"), ValidationError);
  EXPECT_THROW(design_from_json(R"({"seed": 1})"), ValidationError);
}

TEST(Design, JsonWithoutWordsField) {
  const auto d = generate_design(make_words(6), kJoy, 4);
  auto doc = nlohmann::json::parse(design_to_json(d));
  doc.erase("words");
  const auto back = design_from_json(doc.dump());
  EXPECT_EQ(back.blocks, d.blocks);
  EXPECT_EQ(std::set<WordId>(back.words.begin(), back.words.end()),
            std::set<WordId>(d.words.begin(), d.words.end()));
}

TEST(Batching, Arithmetic) {
  const auto d40 = generate_design(make_words(40), kJoy, 1);
  const auto b = batch_design(d40, 20);
  ASSERT_EQ(b.size(), 4u);
  for (const auto& batch : b) {
    EXPECT_EQ(batch.tuple_ids.size(), 21u);
    EXPECT_EQ(batch.required_annotators, 3);
    EXPECT_EQ(std::count(batch.tuple_ids.begin(), batch.tuple_ids.end(), "joy-check"), 1);
  }
  const auto d5 = generate_design(make_words(5), kJoy, 1);
  const auto one = batch_design(d5, 16);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].tuple_ids.size(), 11u);
  EXPECT_THROW(batch_design(d5, 0), ValidationError);
}

TEST(Batching, EveryRegularTupleOnce) {
  const auto d = generate_design(make_words(13), kAll, 8);
  const auto batches = batch_design(d, 7);
  std::map<std::string, int> seen;
  for (const auto& b : batches)
    for (const auto& id : b.tuple_ids) {
      const TupleItem* t = d.find_tuple(id);
      ASSERT_NE(t, nullptr);
      EXPECT_EQ(t->emotion, b.emotion);
      if (!t->is_attention_check) ++seen[id];
    }
  EXPECT_EQ(seen.size(), 13u * 2 * 6);
  for (const auto& [id, c] : seen) EXPECT_EQ(c, 1) << id;
}
