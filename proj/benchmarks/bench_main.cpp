#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "bwslex/design.hpp"
#include "bwslex/lexicon.hpp"
#include "bwslex/regressor.hpp"
#include "bwslex/scoring.hpp"
#include "bwslex/simulation.hpp"
#include "bwslex/stats.hpp"

using namespace bwslex;

namespace {

const Lexicon& lexicon() {
  static const Lexicon lex =
      load_lexicon(std::filesystem::path(BWSLEX_DATA_DIR) / "nonsense_words_emotion_intensities.csv");
  return lex;
}

std::vector<WordId> nonsense(std::size_t n) {
  std::vector<WordId> out;
  for (const auto& e : lexicon())
    if (!e.is_real && out.size() < n) out.push_back(e.word);
  return out;
}

void BM_GenerateDesign(benchmark::State& state) {
  const auto words = nonsense(static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_design(words, {Emotion::joy}, seed++));
}
BENCHMARK(BM_GenerateDesign)->Arg(10)->Arg(40)->Arg(100)->Arg(272);

void BM_AggregateAll(benchmark::State& state) {
  const auto d = generate_design(nonsense(static_cast<std::size_t>(state.range(0))),
                                 {kEmotions.begin(), kEmotions.end()}, 1);
  const auto js = filter_annotators(simulate_judgments(d, truth_from_lexicon(lexicon()),
                                                       make_annotators(0.05, 2)), d).kept;
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_all(js, d));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(js.size()));
}
BENCHMARK(BM_AggregateAll)->Arg(40)->Arg(272);

void BM_WelchT(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.5, 0.2);
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (auto& v : a) v = g(rng);
  for (auto& v : b) v = g(rng) + 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(stats::welch_t(a, b));
}
BENCHMARK(BM_WelchT)->Arg(10)->Arg(200);

void BM_Train(benchmark::State& state) {
  const auto split = regress::nonsense_split(lexicon(), Emotion::joy, 1);
  regress::FeatureSpec spec;
  spec.rep = state.range(0) ? regress::InputRep::phonemes : regress::InputRep::characters;
  spec.ngram = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(regress::train(split.train, Emotion::joy, spec));
}
BENCHMARK(BM_Train)->Args({0, 1})->Args({0, 3})->Args({1, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
