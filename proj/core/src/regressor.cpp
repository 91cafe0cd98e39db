#include "bwslex/regressor.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "bwslex/errors.hpp"
#include "bwslex/stats.hpp"
#include "csv.hpp"
#include "rng.hpp"

namespace bwslex::regress {

std::string_view to_string(InputRep r) noexcept {
  return r == InputRep::characters ? "char" : "phon";
}

std::optional<InputRep> parse_rep(std::string_view s) noexcept {
  if (s == "char" || s == "characters") return InputRep::characters;
  if (s == "phon" || s == "phonemes") return InputRep::phonemes;
  return std::nullopt;
}

std::string_view to_string(Domain d) noexcept {
  return d == Domain::nonsense ? "nonsense" : "real";
}

std::optional<Domain> parse_domain(std::string_view s) noexcept {
  if (s == "nonsense") return Domain::nonsense;
  if (s == "real") return Domain::real;
  return std::nullopt;
}

void validate(const FeatureSpec& spec) {
  if (spec.ngram < 1 || spec.ngram > 3) throw ValidationError("ngram must be 1, 2 or 3", "ngram");
  if (spec.max_len < 1) throw ValidationError("max_len must be >= 1", "max_len");
}

Sample sample_from(const LexEntry& e, Emotion emotion) {
  return Sample{e.word, e.pron, e[emotion]};
}

FeatureCounts featurize(const Sample& s, const FeatureSpec& spec) {
  validate(spec);
  std::vector<std::string> tokens;
  if (spec.rep == InputRep::characters) {
    for (char c : s.word) tokens.emplace_back(1, c);
  } else {
    tokens = s.pron;
  }
  if (tokens.empty())
    throw ValidationError("'" + s.word + "' has no " +
                              (spec.rep == InputRep::characters ? "characters" : "phonemes"),
                          "tokens");
  if (tokens.size() > spec.max_len) tokens.resize(spec.max_len);
  if (spec.boundary_markers) {
    tokens.insert(tokens.begin(), std::string(kStartMarker));
    tokens.emplace_back(kEndMarker);
  }
  const std::string_view sep = spec.rep == InputRep::characters ? "" : " ";
  const auto n = static_cast<std::size_t>(spec.ngram);
  FeatureCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      gram += sep;
      gram += tokens[i + k];
    }
    ++counts[gram];
  }
  return counts;
}

FeatureCounts featurize(const LexEntry& e, const FeatureSpec& spec) {
  return featurize(Sample{e.word, e.pron, 0.0}, spec);
}

namespace {

using SparseRow = std::vector<std::pair<std::size_t, double>>;

SparseRow encode(const TrainedModel& m, const FeatureCounts& counts) {
  SparseRow row;
  for (const auto& [gram, c] : counts) {
    auto it = m.vocabulary.find(gram);
    if (it != m.vocabulary.end()) row.emplace_back(it->second, static_cast<double>(c));
  }
  return row;
}

std::optional<double> safe_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return stats::pearson(x, y);
  } catch (const DegenerateInput&) {
    return std::nullopt;
  }
}

}  // namespace

TrainedModel train(const std::vector<Sample>& samples, Emotion emotion, const FeatureSpec& spec,
                   const Hyper& hyper) {
  validate(spec);
  if (samples.size() < kMinTrainingSamples)
    throw ValidationError("need at least " + std::to_string(kMinTrainingSamples) +
                              " training samples, got " + std::to_string(samples.size()),
                          "samples");
  if (!(hyper.learning_rate > 0.0) || hyper.l2 < 0.0 || hyper.epochs < 0)
    throw ValidationError("invalid hyperparameters", "hyper");
  const bool constant = std::all_of(samples.begin(), samples.end(), [&](const Sample& s) {
    return s.target == samples.front().target;
  });
  if (constant) throw DegenerateInput("all training targets are equal");

  TrainedModel m;
  m.spec = spec;
  m.emotion = emotion;
  m.hyper = hyper;

  std::vector<FeatureCounts> feats;
  feats.reserve(samples.size());
  for (const auto& s : samples) feats.push_back(featurize(s, spec));

  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto rng = detail::make_rng({hyper.seed, 0x70CAull, index(emotion)});
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i : order)
    for (const auto& [gram, c] : feats[i]) m.vocabulary.emplace(gram, m.vocabulary.size());

  std::vector<SparseRow> rows;
  rows.reserve(samples.size());
  for (const auto& f : feats) rows.push_back(encode(m, f));

  const double n = static_cast<double>(samples.size());
  m.weights.assign(m.vocabulary.size(), 0.0);
  std::vector<double> grad(m.weights.size());
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double pred = m.bias;
      for (const auto& [j, x] : rows[i]) pred += m.weights[j] * x;
      const double residual = pred - samples[i].target;
      grad_bias += residual;
      for (const auto& [j, x] : rows[i]) grad[j] += residual * x;
    }
    for (std::size_t j = 0; j < m.weights.size(); ++j)
      m.weights[j] -= hyper.learning_rate * 2.0 * (grad[j] / n + hyper.l2 * m.weights[j]);
    m.bias -= hyper.learning_rate * 2.0 * grad_bias / n;
  }
  return m;
}

double predict_raw(const TrainedModel& model, const Sample& s) {
  double out = model.bias;
  for (const auto& [j, x] : encode(model, featurize(s, model.spec))) out += model.weights[j] * x;
  return out;
}

double predict(const TrainedModel& model, const Sample& s) {
  return std::clamp(predict_raw(model, s), 0.0, 1.0);
}

double predict(const TrainedModel& model, const LexEntry& e) {
  return predict(model, sample_from(e, model.emotion));
}

RealDomain real_domain(const EilResource& eil, const CmuDict* dict, bool require_pron) {
  if (require_pron && !dict) throw ValidationError("pronunciations requested without CMUdict");
  RealDomain out;
  for (const auto& e : eil.entries) {
    Sample s{e.word, {}, e.score};
    if (dict) {
      if (const PhonemeSeq* p = dict->find(e.word)) s.pron = *p;
    }
    if (require_pron && s.pron.empty()) {
      ++out.missing_pron[index(e.emotion)];
      continue;
    }
    out.samples[index(e.emotion)].push_back(std::move(s));
  }
  return out;
}

namespace {

Split partition(std::vector<Sample> all, std::size_t n_train, std::mt19937_64& rng) {
  std::shuffle(all.begin(), all.end(), rng);
  Split s;
  s.train.assign(std::make_move_iterator(all.begin()),
                 std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(n_train)));
  s.test.assign(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(n_train)),
                std::make_move_iterator(all.end()));
  return s;
}

std::size_t train_size(std::size_t n) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * kRealTrainFraction));
}

}  // namespace

Split nonsense_split(const Lexicon& lex, Emotion emotion, std::uint64_t seed) {
  std::vector<Sample> all;
  for (const auto& e : lex)
    if (!e.is_real) all.push_back(sample_from(e, emotion));
  auto rng = detail::make_rng({seed, 0x5E1Full});
  const std::size_t n_train = train_size(all.size());
  return partition(std::move(all), n_train, rng);
}

Split real_split(const std::vector<Sample>& samples, Emotion emotion, std::uint64_t seed) {
  auto rng = detail::make_rng({seed, 0x4EA1ull, index(emotion)});
  return partition(samples, train_size(samples.size()), rng);
}

EvalReport run_experiment(const Lexicon& lex, const RealDomain& real, const FeatureSpec& spec,
                          Domain train_domain, Domain test_domain, std::uint64_t seed,
                          const Hyper& hyper) {
  validate(spec);
  EvalReport report;
  report.train_domain = train_domain;
  report.test_domain = test_domain;
  report.spec = spec;

  double sum = 0.0;
  int defined = 0;
  for (Emotion e : kEmotions) {
    auto split_for = [&](Domain d) {
      if (d == Domain::nonsense) return nonsense_split(lex, e, seed);
      std::vector<Sample> usable;
      for (const auto& s : real.samples[index(e)])
        if (spec.rep == InputRep::characters || !s.pron.empty()) usable.push_back(s);
      return real_split(usable, e, seed);
    };
    const Split train_split = split_for(train_domain);
    const Split test_split = test_domain == train_domain ? train_split : split_for(test_domain);

    Hyper h = hyper;
    h.seed = seed;
    const TrainedModel model = train(train_split.train, e, spec, h);

    std::vector<double> gold, pred;
    for (const auto& s : test_split.test) {
      gold.push_back(s.target);
      pred.push_back(predict(model, s));
    }
    EmotionEval ev;
    ev.emotion = e;
    ev.n_train = train_split.train.size();
    ev.n_test = test_split.test.size();
    ev.r = gold.size() >= 2 ? safe_pearson(pred, gold) : std::nullopt;
    if (ev.r) {
      sum += *ev.r;
      ++defined;
    } else {
      report.macro_incomplete = true;
    }
    report.per_emotion.push_back(ev);
  }
  report.macro_r = defined ? sum / defined : 0.0;
  return report;
}

void write_eval_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "train_domain,test_domain,rep,ngram,emotion,r,n_train,n_test\n";
  for (const auto& rep : reports) {
    const std::string prefix = std::string(to_string(rep.train_domain)) + "," +
                               std::string(to_string(rep.test_domain)) + "," +
                               std::string(to_string(rep.spec.rep)) + "," +
                               std::to_string(rep.spec.ngram) + ",";
    std::size_t n_train = 0, n_test = 0;
    for (const auto& ev : rep.per_emotion) {
      out << prefix << bwslex::to_string(ev.emotion) << ','
          << (ev.r ? detail::format_fixed(*ev.r, 6) : std::string("NA")) << ',' << ev.n_train
          << ',' << ev.n_test << '\n';
      n_train += ev.n_train;
      n_test += ev.n_test;
    }
    out << prefix << (rep.macro_incomplete ? "macro_partial" : "macro") << ','
        << detail::format_fixed(rep.macro_r, 6) << ',' << n_train << ',' << n_test << '\n';
  }
}

}  // namespace bwslex::regress
