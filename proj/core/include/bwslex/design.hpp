#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bwslex/emotion.hpp"

namespace bwslex {

// Words are identified by their surface form.
using WordId = std::string;

struct CheckKey {
  WordId best_expected;
  WordId worst_expected;

  friend bool operator==(const CheckKey&, const CheckKey&) = default;
};

// One presented 4-tuple. Presentation order is significant.
struct TupleItem {
  std::string tuple_id;
  Emotion emotion = Emotion::joy;
  std::array<WordId, 4> words;
  bool is_attention_check = false;
  std::optional<CheckKey> check_key;

  bool contains(std::string_view w) const noexcept;

  friend bool operator==(const TupleItem&, const TupleItem&) = default;
};

struct EmotionBlock {
  Emotion emotion = Emotion::joy;
  std::vector<TupleItem> tuples;

  friend bool operator==(const EmotionBlock&, const EmotionBlock&) = default;
};

struct StudyDesign {
  std::uint64_t seed = 0;
  int annotators_per_tuple = 3;
  std::vector<WordId> words;
  // One block per covered emotion in canonical order.
  std::vector<EmotionBlock> blocks;

  const EmotionBlock* block(Emotion e) const noexcept;
  const TupleItem* find_tuple(std::string_view tuple_id) const noexcept;

  friend bool operator==(const StudyDesign&, const StudyDesign&) = default;
};

inline constexpr int kOccurrencesPerWord = 8;
inline constexpr std::size_t kMinDesignWords = 5;

// Manually selected real words for one emotion's attention check.
struct CheckWords {
  std::array<WordId, 2> neutral;
  WordId related;
  WordId opposite;
};

// Built-in check words per emotion; joy uses door/elbow/happiness/depression.
const CheckWords& default_check_words(Emotion e);

struct DesignOptions {
  int annotators_per_tuple = 3;
  // Append one attention-check tuple per emotion using default_check_words.
  bool attention_checks = true;
  // Full restarts of the randomized repair before giving up.
  int max_restarts = 1000;
};

// Per emotion: 2N ordered-distinct 4-tuples in which every word appears in
// exactly eight tuples and never twice in the same tuple. Deterministic in
// (words, emotions, seed). Throws ValidationError for N < 5 or duplicate
// words and DesignInfeasible when the restart budget runs out.
StudyDesign generate_design(const std::vector<WordId>& words,
                            const std::vector<Emotion>& emotions,
                            std::uint64_t seed,
                            const DesignOptions& options = {});

// Check tuple whose best/worst answers are `related`/`opposite`. The four
// words are shuffled with `seed`.
TupleItem make_attention_check(Emotion e, const std::array<WordId, 2>& neutral,
                               const WordId& related, const WordId& opposite,
                               std::uint64_t seed);

// Throws ValidationError naming the first violated design invariant.
void validate_design(const StudyDesign& d);

struct Batch {
  std::string batch_id;
  Emotion emotion = Emotion::joy;
  // Presentation order, check tuple included.
  std::vector<std::string> tuple_ids;
  int required_annotators = 3;

  friend bool operator==(const Batch&, const Batch&) = default;
};

// Chunks each emotion's non-check tuples into batches of at most
// `tuples_per_batch`, inserting that emotion's check tuple (if any) at a
// seed-determined position in every batch.
std::vector<Batch> batch_design(const StudyDesign& d, std::size_t tuples_per_batch);

// JSON document:
// {seed, annotators_per_tuple, words, emotions:[{emotion, tuples:[{tuple_id,
//  words[4], is_attention_check, check_key?}]}]}
std::string design_to_json(const StudyDesign& d, int indent = 1);
StudyDesign design_from_json(std::string_view text);

}  // namespace bwslex
