#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bwslex/arpabet.hpp"
#include "bwslex/design.hpp"
#include "bwslex/emotion.hpp"
#include "bwslex/lexicon.hpp"
#include "bwslex/stats.hpp"

namespace bwslex {

enum class Position { first, last, any };

inline constexpr std::array<Position, 3> kPositions{Position::first, Position::last, Position::any};

std::string_view to_string(Position p) noexcept;
std::optional<Position> parse_position(std::string_view s) noexcept;

// DISC symbol -> ARPAbet. Most symbols map to one token; the centring
// diphthongs and /A:/ map to a vowel followed by "r" (rhotic ARPAbet).
class DiscTable {
 public:
  DiscTable() = default;
  explicit DiscTable(std::map<char, PhonemeSeq> symbols);

  const PhonemeSeq* find(char symbol) const;
  std::size_t size() const noexcept { return symbols_.size(); }
  const std::map<char, PhonemeSeq>& symbols() const noexcept { return symbols_; }

 private:
  std::map<char, PhonemeSeq> symbols_;
};

// Tab-separated "symbol<TAB>arpabet tokens[<TAB>example]" lines. A line
// starting with '#' and no tab after it is a comment.
DiscTable load_disc_table(const std::filesystem::path& path);
DiscTable parse_disc_table(std::istream& in, const std::string& source = "<stream>");

// Throws ValidationError naming the first symbol missing from the table.
PhonemeSeq disc_to_arpabet(std::string_view disc, const DiscTable& table);

// Words whose pronunciation has `phoneme` at the given position.
std::set<WordId> select_words(const Lexicon& lex, std::string_view phoneme, Position position,
                              bool nonsense_only = true);

// p, t, s, sh, f, m, l, r
const std::vector<std::string>& default_analysis_phonemes();

inline constexpr double kSignificanceLevel = 0.05;

struct PhonemeTestResult {
  std::string phoneme;
  Position position = Position::any;
  Emotion emotion_a = Emotion::joy;
  Emotion emotion_b = Emotion::sadness;
  stats::WelchResult welch;
  std::size_t n_words = 0;
  bool significant = false;
};

struct SkippedCell {
  std::string phoneme;
  Position position = Position::any;
  std::size_t n_words = 0;
  std::string reason;
};

struct PhonemeReport {
  std::vector<PhonemeTestResult> results;
  std::vector<SkippedCell> skipped;
};

struct AnalysisOptions {
  bool nonsense_only = true;
};

// For every (phoneme, position) cell with at least two words, a Welch test
// for each of the 15 unordered emotion pairs (emotion_a precedes emotion_b
// in canonical order). Output is ordered by (phoneme as given, position,
// emotion pair).
PhonemeReport phoneme_emotion_tests(const Lexicon& lex, const std::vector<std::string>& phonemes,
                                    const std::vector<Position>& positions,
                                    const AnalysisOptions& options = {});

struct BoxplotRow {
  std::string phoneme;
  Position position = Position::any;
  Emotion emotion = Emotion::joy;
  stats::BoxplotSummary summary;
};

// Cells with no words are omitted.
std::vector<BoxplotRow> boxplot_data(const Lexicon& lex, const std::vector<std::string>& phonemes,
                                     const std::vector<Position>& positions,
                                     const AnalysisOptions& options = {});

inline constexpr std::size_t kDensityGridPoints = 101;

// Gaussian KDE of one emotion's intensities on 101 evenly spaced points of
// [0, 1]. Without a bandwidth, Silverman's rule is used.
std::vector<std::pair<double, double>> density_data(const Lexicon& lex, Emotion emotion,
                                                    std::optional<double> bandwidth = std::nullopt,
                                                    const AnalysisOptions& options = {});

// phoneme,position,emotion_a,emotion_b,n_a_words,t,df,p,significant
void write_phoneme_report(std::ostream& out, const PhonemeReport& report);
// phoneme,position,emotion,n,mean,q1,median,q3,whisker_low,whisker_high,n_outliers
void write_boxplot_csv(std::ostream& out, const std::vector<BoxplotRow>& rows);
// x,<emotion>... one column per emotion in canonical order
void write_density_csv(std::ostream& out,
                       const std::vector<std::pair<Emotion, std::vector<std::pair<double, double>>>>&
                           curves);

}  // namespace bwslex
