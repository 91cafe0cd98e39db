#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bwslex/design.hpp"
#include "bwslex/emotion.hpp"
#include "bwslex/lexicon.hpp"

namespace bwslex {

using Timestamp = std::chrono::sys_seconds;

// "2022-05-12T08:30:00Z"
std::string format_timestamp(Timestamp t);
// Accepts "YYYY-MM-DDTHH:MM:SSZ" (a "+00:00" suffix is also accepted).
std::optional<Timestamp> parse_timestamp(std::string_view text);

struct Judgment {
  std::string annotator_id;
  std::string tuple_id;
  Emotion emotion = Emotion::joy;
  WordId best;
  WordId worst;
  Timestamp timestamp{};

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

// Throws ValidationError unless best != worst and both belong to `tuple`.
void validate_judgment(const Judgment& j, const TupleItem& tuple);

// Judgment log CSV: annotator_id,tuple_id,emotion,best,worst,timestamp_iso8601
// With `design` given, an is_attention_check column is appended.
void write_judgments(std::ostream& out, const std::vector<Judgment>& judgments,
                     const StudyDesign* with_check_column = nullptr);
std::vector<Judgment> read_judgments(std::istream& in, const std::string& source = "<stream>");

// Canonical order: (emotion, tuple_id, annotator_id, timestamp).
void sort_judgments(std::vector<Judgment>& judgments);

struct FilterResult {
  // Judgments on regular tuples by annotators who passed every check.
  std::vector<Judgment> kept;
  // Annotators who failed at least one attention check (sorted).
  std::vector<std::string> discarded;
  // Kept annotators who never saw an attention check (sorted).
  std::vector<std::string> unchecked;
};

// Throws ValidationError if a judgment references a tuple missing from the
// design or breaks the Judgment invariants.
FilterResult filter_annotators(const std::vector<Judgment>& judgments, const StudyDesign& design);

struct WordScore {
  double raw = 0.0;     // (#best - #worst) / n_judgments, in [-1, 1]
  double scaled = 0.5;  // (raw + 1) / 2, in [0, 1]
  int n_judgments = 0;
  int n_best = 0;
  int n_worst = 0;
};

using ScoreSlice = std::map<WordId, WordScore>;

// Counting-based BWS scores for one emotion. Only regular tuples of that
// emotion contribute; the denominator is the number of judgments made on
// tuples containing the word. Words without judgments are omitted.
ScoreSlice aggregate(const std::vector<Judgment>& judgments, const StudyDesign& design,
                     Emotion emotion);

struct ScoreTable {
  std::map<Emotion, ScoreSlice> slices;

  const WordScore* find(const WordId& w, Emotion e) const;
};

ScoreTable aggregate_all(const std::vector<Judgment>& judgments, const StudyDesign& design);

// Lexicon CSV export. Pronunciations, ids and real flags come from
// `reference`; every scored word must exist there and have all six emotions
// scored. Unscored words of `reference` are left out.
Lexicon scores_to_lexicon(const ScoreTable& table, const Lexicon& reference);

// Long format: word,emotion,raw,scaled,n_judgments (sorted by emotion, word).
void write_scores_long(std::ostream& out, const ScoreTable& table);

struct Correlations {
  double spearman = 0.0;
  double pearson = 0.0;
};

// Scores each bin independently and correlates them over the words scored
// in both. nullopt when fewer than three words are shared or a score vector
// is constant.
std::optional<Correlations> correlate_bins(const std::vector<Judgment>& bin_a,
                                           const std::vector<Judgment>& bin_b,
                                           const StudyDesign& design, Emotion emotion);

struct ShrSlice {
  Emotion emotion = Emotion::joy;
  double spearman = 0.0;
  double pearson = 0.0;
  int iterations = 0;
  int skipped = 0;
};

struct ShrResult {
  std::vector<ShrSlice> slices;
  int iterations = 100;
  std::uint64_t seed = 0;
};

inline constexpr int kDefaultShrIterations = 100;

// Split-half reliability. Each iteration sends one or two (uniformly) of every
// tuple's judgments to bin A and the rest to bin B, then correlates the two
// score vectors; results are averaged over iterations. Iteration i draws
// from a stream keyed by (seed, emotion, i). Throws DegenerateInput when more
// than half the iterations are skipped.
ShrSlice split_half_reliability(const std::vector<Judgment>& judgments,
                                const StudyDesign& design, Emotion emotion,
                                int iterations, std::uint64_t seed);

ShrResult split_half_reliability_all(const std::vector<Judgment>& judgments,
                                     const StudyDesign& design, int iterations,
                                     std::uint64_t seed);

}  // namespace bwslex
