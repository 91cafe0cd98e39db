#include "bwslex/phonology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "bwslex/errors.hpp"
#include "csv.hpp"

namespace bwslex {

std::string_view to_string(Position p) noexcept {
  switch (p) {
    case Position::first:
      return "first";
    case Position::last:
      return "last";
    case Position::any:
      return "any";
  }
  return "any";
}

std::optional<Position> parse_position(std::string_view s) noexcept {
  for (Position p : kPositions)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

DiscTable::DiscTable(std::map<char, PhonemeSeq> symbols) : symbols_(std::move(symbols)) {
  for (const auto& [sym, seq] : symbols_) {
    if (seq.empty())
      throw ValidationError(std::string("DISC symbol '") + sym + "' maps to nothing", "arpabet");
    for (const auto& tok : seq)
      if (!is_arpabet_token(tok))
        throw ValidationError(std::string("DISC symbol '") + sym + "' maps to unknown token " + tok,
                              "arpabet");
  }
}

const PhonemeSeq* DiscTable::find(char symbol) const {
  auto it = symbols_.find(symbol);
  return it == symbols_.end() ? nullptr : &it->second;
}

DiscTable parse_disc_table(std::istream& in, const std::string& source) {
  std::map<char, PhonemeSeq> symbols;
  std::string line;
  std::size_t lineno = 0;
  while (detail::read_line(in, line)) {
    ++lineno;
    // '#' is itself a DISC symbol, so only "#" not followed by a tab is a comment.
    if (line.empty() || (line[0] == '#' && (line.size() < 2 || line[1] != '\t'))) continue;
    auto f = detail::split_csv(line, '\t');
    if (f.size() < 2 || f[0].size() != 1)
      throw ParseError(source, lineno, "expected a single-character DISC symbol and its ARPAbet");
    std::string bad;
    PhonemeSeq seq = parse_phonemes(f[1], &bad);
    if (seq.empty()) throw ParseError(source, lineno, "bad ARPAbet '" + f[1] + "'");
    if (!symbols.emplace(f[0][0], std::move(seq)).second)
      throw ParseError(source, lineno, "duplicate DISC symbol '" + f[0] + "'");
  }
  return DiscTable(std::move(symbols));
}

DiscTable load_disc_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_disc_table(in, path.string());
}

PhonemeSeq disc_to_arpabet(std::string_view disc, const DiscTable& table) {
  PhonemeSeq out;
  for (char c : disc) {
    const PhonemeSeq* seq = table.find(c);
    if (!seq) throw ValidationError(std::string("unknown DISC symbol '") + c + "'", "disc");
    out.insert(out.end(), seq->begin(), seq->end());
  }
  return out;
}

namespace {

bool matches(const PhonemeSeq& pron, std::string_view phoneme, Position position) {
  if (pron.empty()) return false;
  switch (position) {
    case Position::first:
      return pron.front() == phoneme;
    case Position::last:
      return pron.back() == phoneme;
    case Position::any:
      return std::find(pron.begin(), pron.end(), phoneme) != pron.end();
  }
  return false;
}

std::vector<const LexEntry*> select_entries(const Lexicon& lex, std::string_view phoneme,
                                            Position position, bool nonsense_only) {
  std::vector<const LexEntry*> out;
  for (const auto& e : lex) {
    if (nonsense_only && e.is_real) continue;
    if (matches(e.pron, phoneme, position)) out.push_back(&e);
  }
  return out;
}

std::vector<double> column(const std::vector<const LexEntry*>& entries, Emotion e) {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto* entry : entries) v.push_back((*entry)[e]);
  return v;
}

void require_phoneme(std::string_view phoneme) {
  if (!is_arpabet_token(phoneme))
    throw ValidationError("unknown ARPAbet phoneme '" + std::string(phoneme) + "'", "phoneme");
}

}  // namespace

std::set<WordId> select_words(const Lexicon& lex, std::string_view phoneme, Position position,
                              bool nonsense_only) {
  require_phoneme(phoneme);
  std::set<WordId> out;
  for (const auto* e : select_entries(lex, phoneme, position, nonsense_only)) out.insert(e->word);
  return out;
}

const std::vector<std::string>& default_analysis_phonemes() {
  static const std::vector<std::string> kPhonemes{"p", "t", "s", "sh", "f", "m", "l", "r"};
  return kPhonemes;
}

PhonemeReport phoneme_emotion_tests(const Lexicon& lex, const std::vector<std::string>& phonemes,
                                    const std::vector<Position>& positions,
                                    const AnalysisOptions& options) {
  PhonemeReport report;
  for (const auto& ph : phonemes) {
    require_phoneme(ph);
    for (Position pos : positions) {
      auto entries = select_entries(lex, ph, pos, options.nonsense_only);
      if (entries.size() < 2) {
        report.skipped.push_back({ph, pos, entries.size(), "fewer than two words"});
        continue;
      }
      for (std::size_t a = 0; a < kNumEmotions; ++a) {
        for (std::size_t b = a + 1; b < kNumEmotions; ++b) {
          PhonemeTestResult r;
          r.phoneme = ph;
          r.position = pos;
          r.emotion_a = kEmotions[a];
          r.emotion_b = kEmotions[b];
          r.n_words = entries.size();
          try {
            r.welch = stats::welch_t(column(entries, r.emotion_a), column(entries, r.emotion_b));
          } catch (const DegenerateInput&) {
            report.skipped.push_back({ph, pos, entries.size(),
                                      std::string(to_string(r.emotion_a)) + "/" +
                                          std::string(to_string(r.emotion_b)) +
                                          ": both samples constant"});
            continue;
          }
          r.significant = r.welch.p_two_tailed <= kSignificanceLevel;
          report.results.push_back(std::move(r));
        }
      }
    }
  }
  return report;
}

std::vector<BoxplotRow> boxplot_data(const Lexicon& lex, const std::vector<std::string>& phonemes,
                                     const std::vector<Position>& positions,
                                     const AnalysisOptions& options) {
  std::vector<BoxplotRow> rows;
  for (const auto& ph : phonemes) {
    require_phoneme(ph);
    for (Position pos : positions) {
      auto entries = select_entries(lex, ph, pos, options.nonsense_only);
      if (entries.empty()) continue;
      for (Emotion e : kEmotions)
        rows.push_back({ph, pos, e, stats::boxplot(column(entries, e))});
    }
  }
  return rows;
}

std::vector<std::pair<double, double>> density_data(const Lexicon& lex, Emotion emotion,
                                                    std::optional<double> bandwidth,
                                                    const AnalysisOptions& options) {
  std::vector<double> values;
  for (const auto& e : lex)
    if (!options.nonsense_only || !e.is_real) values.push_back(e[emotion]);
  if (values.empty()) throw ValidationError("no words selected for the density estimate");
  double bw = 0.0;
  if (bandwidth) {
    bw = *bandwidth;
  } else if (values.size() >= 2) {
    bw = stats::silverman_bandwidth(values);
  } else {
    bw = 0.1;
  }
  if (!(bw > 0.0)) throw ValidationError("bandwidth must be positive", "bandwidth");
  std::vector<double> grid(kDensityGridPoints);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  return stats::gaussian_kde(values, bw, grid);
}

void write_phoneme_report(std::ostream& out, const PhonemeReport& report) {
  out << "phoneme,position,emotion_a,emotion_b,n_a_words,t,df,p,significant\n";
  for (const auto& r : report.results)
    out << r.phoneme << ',' << to_string(r.position) << ',' << to_string(r.emotion_a) << ','
        << to_string(r.emotion_b) << ',' << r.n_words << ',' << detail::format_fixed(r.welch.t, 6)
        << ',' << detail::format_fixed(r.welch.df, 6) << ','
        << detail::format_fixed(r.welch.p_two_tailed, 8) << ',' << (r.significant ? 1 : 0)
        << '\n';
}

void write_boxplot_csv(std::ostream& out, const std::vector<BoxplotRow>& rows) {
  out << "phoneme,position,emotion,n,mean,q1,median,q3,whisker_low,whisker_high,n_outliers\n";
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << r.phoneme << ',' << to_string(r.position) << ',' << to_string(r.emotion) << ',' << s.n
        << ',' << detail::format_fixed(s.mean, 6) << ',' << detail::format_fixed(s.q1, 6) << ','
        << detail::format_fixed(s.median, 6) << ',' << detail::format_fixed(s.q3, 6) << ','
        << detail::format_fixed(s.whisker_low, 6) << ',' << detail::format_fixed(s.whisker_high, 6)
        << ',' << s.outliers.size() << '\n';
  }
}

void write_density_csv(
    std::ostream& out,
    const std::vector<std::pair<Emotion, std::vector<std::pair<double, double>>>>& curves) {
  out << 'x';
  for (const auto& [e, curve] : curves) out << ',' << to_string(e);
  out << '\n';
  if (curves.empty()) return;
  const std::size_t n = curves.front().second.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << detail::format_fixed(curves.front().second[i].first, 2);
    for (const auto& [e, curve] : curves) out << ',' << detail::format_fixed(curve.at(i).second, 6);
    out << '\n';
  }
}

}  // namespace bwslex
