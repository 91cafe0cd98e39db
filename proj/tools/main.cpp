// bwslex: command-line front end for the BWS lexicon toolkit.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "bwslex/design.hpp"
#include "bwslex/errors.hpp"
#include "bwslex/http_server.hpp"
#include "bwslex/lexicon.hpp"
#include "bwslex/phonology.hpp"
#include "bwslex/regressor.hpp"
#include "bwslex/scoring.hpp"
#include "bwslex/service.hpp"
#include "bwslex/simulation.hpp"

namespace fs = std::filesystem;
using namespace bwslex;

namespace {

std::string default_lexicon() {
  if (fs::exists(BWSLEX_SOURCE_LEXICON)) return BWSLEX_SOURCE_LEXICON;
  return BWSLEX_DEFAULT_LEXICON;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write(out);
  if (!out) throw Error("error writing " + path);
}

// One word per line; a lexicon CSV contributes its nonsense words.
std::vector<WordId> read_words(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string first;
  std::getline(in, first);
  if (first.rfind("IDs,", 0) == 0) {
    std::vector<WordId> out;
    for (const auto& e : load_lexicon(path))
      if (!e.is_real) out.push_back(e.word);
    return out;
  }
  std::vector<WordId> out;
  auto take = [&](std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') return;
    const auto e = line.find_last_not_of(" \t");
    out.push_back(line.substr(b, e - b + 1));
  };
  take(first);
  for (std::string line; std::getline(in, line);) take(line);
  return out;
}

std::vector<Emotion> parse_emotions(const std::vector<std::string>& names) {
  if (names.empty()) return {kEmotions.begin(), kEmotions.end()};
  std::vector<Emotion> out;
  for (const auto& n : names) out.push_back(emotion_from_string(n));
  return out;
}

std::vector<Judgment> load_judgments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_judgments(in, path);
}

StudyDesign load_design(const std::string& path) { return design_from_json(slurp(path)); }

// Set from the signal handler; a watcher thread does the actual shutdown.
volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bwslex: best-worst scaling emotion lexicon toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bwslex 0.1.0");

  // design
  auto* design_cmd = app.add_subcommand("design", "generate a BWS study design");
  std::string words_path, out_path;
  std::uint64_t seed = 0;
  std::vector<std::string> emotion_names;
  bool no_checks = false;
  int annotators = 3;
  design_cmd->add_option("--words", words_path, "word list (one per line) or lexicon CSV")
      ->required();
  design_cmd->add_option("--seed", seed)->required();
  design_cmd->add_option("--out", out_path, "output JSON (default stdout)");
  design_cmd->add_option("--emotions", emotion_names)->delimiter(',');
  design_cmd->add_option("--annotators", annotators, "annotators per tuple")->capture_default_str();
  design_cmd->add_flag("--no-checks", no_checks, "omit attention-check tuples");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "simulate three annotators on a design");
  std::string design_path, lexicon_path = default_lexicon();
  double sigma = 0.0, failure_rate = 0.0;
  int failing = 3;
  sim_cmd->add_option("--design", design_path)->required();
  sim_cmd->add_option("--lexicon", lexicon_path, "truth intensities")->capture_default_str();
  sim_cmd->add_option("--sigma", sigma)->required()->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--seed", seed)->required();
  sim_cmd->add_option("--failure-rate", failure_rate)->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--failing", failing, "how many annotators get --failure-rate")
      ->check(CLI::Range(0, 3))
      ->capture_default_str();
  sim_cmd->add_option("--out", out_path);

  // aggregate
  auto* agg_cmd = app.add_subcommand("aggregate", "filter and score a judgment log");
  std::string judgments_path;
  std::string reference_path;
  agg_cmd->add_option("--design", design_path)->required();
  agg_cmd->add_option("--judgments", judgments_path)->required();
  agg_cmd->add_option("--lexicon", reference_path,
                      "reference lexicon; output becomes a lexicon CSV");
  agg_cmd->add_option("--out", out_path);

  // reliability
  auto* rel_cmd = app.add_subcommand("reliability", "split-half reliability");
  int iterations = kDefaultShrIterations;
  rel_cmd->add_option("--design", design_path)->required();
  rel_cmd->add_option("--judgments", judgments_path)->required();
  rel_cmd->add_option("--iterations", iterations)->check(CLI::PositiveNumber)->capture_default_str();
  rel_cmd->add_option("--seed", seed)->required();
  rel_cmd->add_option("--out", out_path);

  // phonemes
  auto* ph_cmd = app.add_subcommand("phonemes", "phoneme/emotion Welch tests and boxplot data");
  std::vector<std::string> phonemes = default_analysis_phonemes();
  std::vector<std::string> position_names{"first", "last", "any"};
  std::string out_dir;
  bool include_real = false;
  ph_cmd->add_option("--lexicon", lexicon_path)->capture_default_str();
  ph_cmd->add_option("--phonemes", phonemes)->delimiter(',')->capture_default_str();
  ph_cmd->add_option("--positions", position_names)->delimiter(',')->capture_default_str();
  ph_cmd->add_option("--out-dir", out_dir)->required();
  ph_cmd->add_flag("--include-real", include_real);

  // density
  auto* den_cmd = app.add_subcommand("density", "kernel density of intensities per emotion");
  std::optional<double> bandwidth;
  den_cmd->add_option("--lexicon", lexicon_path)->capture_default_str();
  den_cmd->add_option("--out", out_path);
  den_cmd->add_option("--bandwidth", bandwidth)->check(CLI::PositiveNumber);
  den_cmd->add_flag("--include-real", include_real);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "train n-gram regressors and report Pearson r");
  eval_cmd->alias("train");
  std::string eil_path, cmudict_path, models_dir;
  std::vector<std::string> reps{"char", "phon"};
  std::vector<int> ngrams{1, 2, 3};
  std::string train_domain = "nonsense", test_domain = "nonsense";
  eval_cmd->add_option("--nonsense", lexicon_path)->capture_default_str();
  eval_cmd->add_option("--eil", eil_path, "NRC emotion intensity lexicon");
  eval_cmd->add_option("--cmudict", cmudict_path);
  eval_cmd->add_option("--rep", reps)->delimiter(',')->check(CLI::IsMember({"char", "phon"}))
      ->capture_default_str();
  eval_cmd->add_option("--ngram", ngrams)->delimiter(',')->check(CLI::Range(1, 3))
      ->capture_default_str();
  eval_cmd->add_option("--train-domain", train_domain)
      ->check(CLI::IsMember({"nonsense", "real"}))
      ->capture_default_str();
  eval_cmd->add_option("--test-domain", test_domain)
      ->check(CLI::IsMember({"nonsense", "real"}))
      ->capture_default_str();
  eval_cmd->add_option("--seed", seed)->required();
  eval_cmd->add_option("--out", out_path);
  eval_cmd->add_option("--save-models", models_dir, "write one model JSON per emotion and config");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "run the annotation service");
  std::string listen = "127.0.0.1:8080", data_dir;
  std::size_t tuples_per_batch = 20;
  serve_cmd->add_option("--design", design_path, "study created at startup (idempotent)");
  serve_cmd->add_option("--listen", listen, "host:port")->envname("BWSLEX_LISTEN")
      ->capture_default_str();
  serve_cmd->add_option("--data", data_dir, "directory for study logs")
      ->envname("BWSLEX_DATA_DIR")
      ->required();
  serve_cmd->add_option("--seed", seed)->envname("BWSLEX_SEED")->required();
  serve_cmd->add_option("--tuples-per-batch", tuples_per_batch)->check(CLI::PositiveNumber)
      ->capture_default_str();

  // top
  auto* top_cmd = app.add_subcommand("top", "highest-intensity words for one emotion");
  std::string emotion_name;
  std::size_t k = 10;
  top_cmd->add_option("--lexicon", lexicon_path)->capture_default_str();
  top_cmd->add_option("--emotion", emotion_name)->required();
  top_cmd->add_option("--k", k)->capture_default_str();
  top_cmd->add_flag("--include-real", include_real);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*design_cmd) {
      DesignOptions opts;
      opts.attention_checks = !no_checks;
      opts.annotators_per_tuple = annotators;
      const auto d = generate_design(read_words(words_path), parse_emotions(emotion_names), seed, opts);
      emit(out_path, [&](std::ostream& o) { o << design_to_json(d); });
    } else if (*sim_cmd) {
      const auto d = load_design(design_path);
      auto sims = make_annotators(sigma, seed);
      for (int i = 0; i < failing && i < static_cast<int>(sims.size()); ++i)
        sims[i].failure_rate = failure_rate;
      const auto js = simulate_judgments(d, truth_from_lexicon(load_lexicon(lexicon_path)), sims);
      emit(out_path, [&](std::ostream& o) { write_judgments(o, js); });
    } else if (*agg_cmd) {
      const auto d = load_design(design_path);
      const auto filtered = filter_annotators(load_judgments(judgments_path), d);
      for (const auto& a : filtered.discarded)
        std::cerr << "discarded annotator " << a << " (failed attention check)\n";
      for (const auto& a : filtered.unchecked)
        std::cerr << "annotator " << a << " saw no attention check\n";
      const auto table = aggregate_all(filtered.kept, d);
      if (!reference_path.empty()) {
        const auto lex = scores_to_lexicon(table, load_lexicon(reference_path));
        emit(out_path, [&](std::ostream& o) { write_lexicon(o, lex); });
      } else {
        emit(out_path, [&](std::ostream& o) { write_scores_long(o, table); });
      }
    } else if (*rel_cmd) {
      const auto d = load_design(design_path);
      const auto kept = filter_annotators(load_judgments(judgments_path), d).kept;
      const auto r = split_half_reliability_all(kept, d, iterations, seed);
      emit(out_path, [&](std::ostream& o) {
        o << "emotion,spearman,pearson,iterations,skipped\n";
        char buf[128];
        for (const auto& s : r.slices) {
          std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f,%d,%d\n",
                        std::string(to_string(s.emotion)).c_str(), s.spearman, s.pearson,
                        s.iterations, s.skipped);
          o << buf;
        }
      });
    } else if (*ph_cmd) {
      const auto lex = load_lexicon(lexicon_path);
      std::vector<Position> positions;
      for (const auto& p : position_names) {
        auto pos = parse_position(p);
        if (!pos) throw ValidationError("unknown position '" + p + "'", "positions");
        positions.push_back(*pos);
      }
      AnalysisOptions opts;
      opts.nonsense_only = !include_real;
      const auto report = phoneme_emotion_tests(lex, phonemes, positions, opts);
      const auto boxes = boxplot_data(lex, phonemes, positions, opts);
      fs::create_directories(out_dir);
      emit((fs::path(out_dir) / "welch_tests.csv").string(),
           [&](std::ostream& o) { write_phoneme_report(o, report); });
      emit((fs::path(out_dir) / "boxplots.csv").string(),
           [&](std::ostream& o) { write_boxplot_csv(o, boxes); });
      for (const auto& s : report.skipped)
        std::cerr << "skipped /" << s.phoneme << "/ " << to_string(s.position) << " (" << s.n_words
                  << " words): " << s.reason << '\n';
    } else if (*den_cmd) {
      const auto lex = load_lexicon(lexicon_path);
      AnalysisOptions opts;
      opts.nonsense_only = !include_real;
      std::vector<std::pair<Emotion, std::vector<std::pair<double, double>>>> curves;
      for (Emotion e : kEmotions) curves.emplace_back(e, density_data(lex, e, bandwidth, opts));
      emit(out_path, [&](std::ostream& o) { write_density_csv(o, curves); });
    } else if (*eval_cmd) {
      const auto lex = load_lexicon(lexicon_path);
      const auto train_d = *regress::parse_domain(train_domain);
      const auto test_d = *regress::parse_domain(test_domain);
      const bool need_real = train_d == regress::Domain::real || test_d == regress::Domain::real;
      regress::RealDomain real;
      std::optional<CmuDict> dict;
      if (need_real) {
        if (eil_path.empty()) throw ValidationError("--eil is required for the real domain", "eil");
        const bool phon = std::find(reps.begin(), reps.end(), "phon") != reps.end();
        if (phon && cmudict_path.empty())
          throw ValidationError("--cmudict is required for phoneme input on real words", "cmudict");
        if (!cmudict_path.empty()) dict = load_cmudict(cmudict_path);
        real = regress::real_domain(load_eil(eil_path), dict ? &*dict : nullptr, false);
      }
      std::vector<regress::EvalReport> reports;
      for (const auto& rep : reps)
        for (int n : ngrams) {
          regress::FeatureSpec spec;
          spec.rep = *regress::parse_rep(rep);
          spec.ngram = n;
          reports.push_back(regress::run_experiment(lex, real, spec, train_d, test_d, seed));
          if (!models_dir.empty()) {
            fs::create_directories(models_dir);
            for (Emotion e : kEmotions) {
              const auto split = train_d == regress::Domain::nonsense
                                     ? regress::nonsense_split(lex, e, seed)
                                     : regress::real_split(real.samples[index(e)], e, seed);
              regress::Hyper h;
              h.seed = seed;
              const auto model = regress::train(split.train, e, spec, h);
              const auto name = std::string(to_string(train_d)) + "_" + rep + std::to_string(n) +
                                "_" + std::string(to_string(e)) + ".json";
              emit((fs::path(models_dir) / name).string(),
                   [&](std::ostream& o) { o << regress::model_to_json(model); });
            }
          }
        }
      emit(out_path, [&](std::ostream& o) { regress::write_eval_csv(o, reports); });
    } else if (*serve_cmd) {
      const auto colon = listen.rfind(':');
      if (colon == std::string::npos) throw ValidationError("--listen must be host:port", "listen");
      const std::string host = listen.substr(0, colon);
      const int port = std::atoi(listen.c_str() + colon + 1);
      ServiceOptions so;
      so.data_dir = data_dir;
      so.seed = seed;
      StudyService service(so);
      if (!design_path.empty()) {
        const std::string text = slurp(design_path);
        CreateOptions co;
        co.tuples_per_batch = tuples_per_batch;
        co.idempotency_key = "design:" + fs::absolute(design_path).string();
        const auto id = service.create_study(design_from_json(text), co);
        std::cout << "study " << id << '\n';
      }
      HttpServer server(service);
      const int bound = server.bind(host, port);
      if (bound < 0) throw Error("cannot listen on " + listen);
      std::cout << "listening on " << host << ':' << bound << std::endl;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::atomic<bool> done{false};
      std::thread watcher([&] {
        while (!g_stop && !done) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
      });
      server.listen_after_bind();
      done = true;
      watcher.join();
    } else if (*top_cmd) {
      const auto lex = load_lexicon(lexicon_path);
      const auto e = emotion_from_string(emotion_name);
      char buf[128];
      for (const auto& w : top_k(lex, e, k, !include_real)) {
        std::snprintf(buf, sizeof buf, "%s %.4f\n", w.word.c_str(), w.intensity);
        std::cout << buf;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "bwslex: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
