#include "bwslex/simulation.hpp"

#include <random>

#include "bwslex/errors.hpp"
#include "rng.hpp"

namespace bwslex {

namespace {

// 2022-01-01T00:00:00Z
constexpr std::chrono::seconds kEpoch{1640995200};

}  // namespace

Truth truth_from_lexicon(const Lexicon& lex) {
  Truth t;
  for (const auto& e : lex)
    for (Emotion em : kEmotions) t[{e.word, em}] = e[em];
  return t;
}

std::vector<SimAnnotator> make_annotators(double sigma, std::uint64_t seed, double failure_rate,
                                          int count) {
  std::vector<SimAnnotator> out;
  auto rng = detail::make_rng({seed, 0x5111ull});
  for (int i = 0; i < count; ++i)
    out.push_back({"sim-" + std::to_string(i), sigma, rng(), failure_rate});
  return out;
}

std::vector<Judgment> simulate_judgments(const StudyDesign& design, const Truth& truth,
                                         const std::vector<SimAnnotator>& annotators) {
  for (const auto& block : design.blocks)
    for (const auto& w : design.words)
      if (!truth.count({w, block.emotion}))
        throw ValidationError("truth has no " + std::string(to_string(block.emotion)) +
                                  " value for '" + w + "'",
                              "truth");
  for (const auto& a : annotators) {
    if (!(a.noise_sigma >= 0.0)) throw ValidationError("noise_sigma must be >= 0", "noise_sigma");
    if (!(a.failure_rate >= 0.0 && a.failure_rate <= 1.0))
      throw ValidationError("failure_rate must be in [0,1]", "failure_rate");
  }

  std::vector<Judgment> out;
  std::int64_t tick = 0;
  for (const auto& a : annotators) {
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (const auto& block : design.blocks) {
      for (const auto& t : block.tuples) {
        Judgment j;
        j.annotator_id = a.annotator_id;
        j.tuple_id = t.tuple_id;
        j.emotion = t.emotion;
        j.timestamp = Timestamp{kEpoch + std::chrono::seconds{tick++}};
        if (t.is_attention_check) {
          const bool correct = coin(rng) >= a.failure_rate;
          j.best = correct ? t.check_key->best_expected : t.check_key->worst_expected;
          j.worst = correct ? t.check_key->worst_expected : t.check_key->best_expected;
          out.push_back(std::move(j));
          continue;
        }
        std::size_t best = 0, worst = 0;
        std::array<double, 4> perceived{};
        for (std::size_t i = 0; i < 4; ++i) {
          const double eps = a.noise_sigma > 0.0 ? a.noise_sigma * noise(rng) : 0.0;
          perceived[i] = truth.at({t.words[i], t.emotion}) + eps;
        }
        // Ties go to the lexicographically lowest word.
        for (std::size_t i = 1; i < 4; ++i) {
          if (perceived[i] > perceived[best] ||
              (perceived[i] == perceived[best] && t.words[i] < t.words[best]))
            best = i;
          if (perceived[i] < perceived[worst] ||
              (perceived[i] == perceived[worst] && t.words[i] < t.words[worst]))
            worst = i;
        }
        if (best == worst) {
          // All four perceived values equal: pick the next-lowest word as worst.
          worst = best == 0 ? 1 : 0;
          for (std::size_t i = 0; i < 4; ++i)
            if (i != best && t.words[i] < t.words[worst]) worst = i;
        }
        j.best = t.words[best];
        j.worst = t.words[worst];
        out.push_back(std::move(j));
      }
    }
  }
  return out;
}

}  // namespace bwslex
