#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bwslex/arpabet.hpp"
#include "bwslex/emotion.hpp"
#include "bwslex/lexicon.hpp"

namespace bwslex::regress {

enum class InputRep { characters, phonemes };

std::string_view to_string(InputRep r) noexcept;
std::optional<InputRep> parse_rep(std::string_view s) noexcept;  // "char"/"characters", "phon"/"phonemes"

enum class Domain { nonsense, real };

std::string_view to_string(Domain d) noexcept;
std::optional<Domain> parse_domain(std::string_view s) noexcept;

inline constexpr std::size_t kDefaultMaxLen = 16;
inline constexpr std::string_view kStartMarker = "^";
inline constexpr std::string_view kEndMarker = "$";

struct FeatureSpec {
  InputRep rep = InputRep::characters;
  int ngram = 1;  // 1, 2 or 3
  std::size_t max_len = kDefaultMaxLen;
  bool boundary_markers = true;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

void validate(const FeatureSpec& spec);

// One regression example: a word, its pronunciation (may be empty for
// character input) and the target intensity in [0, 1].
struct Sample {
  std::string word;
  PhonemeSeq pron;
  double target = 0.0;
};

Sample sample_from(const LexEntry& e, Emotion emotion);

// n-gram -> count. Character n-grams are concatenated ("ju"); phoneme
// n-grams are space-joined ("b ae").
using FeatureCounts = std::map<std::string, int>;

// Token sequence (characters or phonemes) truncated to max_len, wrapped in
// start/end markers when enabled, then counted as contiguous n-grams.
// Throws ValidationError on an empty token sequence.
FeatureCounts featurize(const Sample& s, const FeatureSpec& spec);
FeatureCounts featurize(const LexEntry& e, const FeatureSpec& spec);

struct Hyper {
  double learning_rate = 0.1;
  double l2 = 1e-3;
  int epochs = 200;
  std::uint64_t seed = 0;

  friend bool operator==(const Hyper&, const Hyper&) = default;
};

struct TrainedModel {
  FeatureSpec spec;
  Emotion emotion = Emotion::joy;
  std::map<std::string, std::size_t> vocabulary;
  std::vector<double> weights;
  double bias = 0.0;
  Hyper hyper;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

inline constexpr std::size_t kMinTrainingSamples = 10;

// Linear model on n-gram counts: minimizes the mean squared error plus
// l2 * |w|^2 (bias unpenalized) with full-batch gradient descent for a
// fixed number of epochs. The vocabulary is numbered in first-seen order over a seed-shuffled
// pass of the training set. Throws ValidationError for fewer than 10 samples
// and DegenerateInput when all targets are equal.
TrainedModel train(const std::vector<Sample>& samples, Emotion emotion, const FeatureSpec& spec,
                   const Hyper& hyper = {});

// Unclamped w . x + b; n-grams outside the vocabulary are ignored.
double predict_raw(const TrainedModel& model, const Sample& s);
// predict_raw clamped to [0, 1].
double predict(const TrainedModel& model, const Sample& s);
double predict(const TrainedModel& model, const LexEntry& e);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);

// Real-word training data for one emotion, pronunciations from CMUdict.
struct RealDomain {
  PerEmotion<std::vector<Sample>> samples;
  // Per emotion: words dropped because CMUdict has no pronunciation (only
  // counted when pronunciations were requested).
  PerEmotion<std::size_t> missing_pron{};
};

// Builds per-emotion samples from an EIL resource. With `require_pron`,
// words absent from `dict` are excluded and counted.
RealDomain real_domain(const EilResource& eil, const CmuDict* dict, bool require_pron);

struct EmotionEval {
  Emotion emotion = Emotion::joy;
  std::optional<double> r;  // nullopt when the test targets are constant
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

struct EvalReport {
  Domain train_domain = Domain::nonsense;
  Domain test_domain = Domain::nonsense;
  FeatureSpec spec;
  std::vector<EmotionEval> per_emotion;
  // Mean over the emotions whose r is defined. r is undefined when either
  // the gold targets or the predictions of the test split are constant.
  double macro_r = 0.0;
  // True when some emotion was excluded from macro_r.
  bool macro_incomplete = false;
};

inline constexpr std::size_t kNonsenseTrain = 204;
inline constexpr std::size_t kNonsenseTest = 68;
inline constexpr double kRealTrainFraction = 0.75;

struct Split {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// Seed-shuffled 75/25 partition of the nonsense entries of `lex` (204/68 for
// the 272-word lexicon); the same word partition is used for every emotion.
Split nonsense_split(const Lexicon& lex, Emotion emotion, std::uint64_t seed);
// Seed-shuffled 75/25 partition.
Split real_split(const std::vector<Sample>& samples, Emotion emotion, std::uint64_t seed);

// Trains one model per emotion on the train split of `train_domain` and
// evaluates Pearson r on the test split of `test_domain`. Nonsense samples
// are the is_real == false entries of `lex`. For phoneme input, real words
// without a pronunciation are skipped.
EvalReport run_experiment(const Lexicon& lex, const RealDomain& real, const FeatureSpec& spec,
                          Domain train_domain, Domain test_domain, std::uint64_t seed,
                          const Hyper& hyper = {});

// train_domain,test_domain,rep,ngram,emotion,r,n_train,n_test
// The final row per report has emotion "macro".
void write_eval_csv(std::ostream& out, const std::vector<EvalReport>& reports);

}  // namespace bwslex::regress
