#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bwslex/arpabet.hpp"
#include "bwslex/emotion.hpp"

namespace bwslex {

struct LexEntry {
  std::size_t id = 0;
  std::string word;
  PhonemeSeq pron;
  bool is_real = false;
  Intensities intensity{};

  double operator[](Emotion e) const noexcept { return intensity[index(e)]; }

  friend bool operator==(const LexEntry&, const LexEntry&) = default;
};

// An immutable word list with a word -> position index. Words are unique.
class Lexicon {
 public:
  Lexicon() = default;

  // Throws ValidationError on duplicate words or entries that break the
  // LexEntry invariants (empty pron, non-letter word, intensity outside [0,1]).
  explicit Lexicon(std::vector<LexEntry> entries);

  const std::vector<LexEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const LexEntry* find(std::string_view word) const;

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  // Copy restricted to nonsense (is_real == false) or real entries.
  Lexicon nonsense() const;
  Lexicon real() const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<LexEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Lexicon CSV:
//   IDs,Word,ARPA Pron,Real,Joy,Sadness,Anger,Disgust,Fear,Surprise
// Errors carry the 1-based line number (header is line 1).
Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon parse_lexicon(std::istream& in, const std::string& source = "<stream>");
void write_lexicon(std::ostream& out, const Lexicon& lex);
void save_lexicon(const std::filesystem::path& path, const Lexicon& lex);

// NRC-EIL style resource: word<TAB>emotion<TAB>score per line. A first line
// with a non-numeric score is a header.
struct EilEntry {
  std::string word;
  Emotion emotion = Emotion::joy;
  double score = 0.0;
};

struct EilResource {
  std::vector<EilEntry> entries;
  // Lines whose emotion lies outside the six-emotion set.
  std::size_t skipped_other_emotion = 0;
};

EilResource load_eil(const std::filesystem::path& path);
EilResource parse_eil(std::istream& in, const std::string& source = "<stream>");

// CMUdict: "WORD  PH0 PH1 ..." lines, ";;;" comments, "WORD(2)" alternates
// ignored, keys lowercased and stress digits stripped.
struct CmuDict {
  std::map<std::string, PhonemeSeq> pronunciations;
  std::size_t malformed_lines = 0;

  const PhonemeSeq* find(std::string_view word) const;
};

CmuDict load_cmudict(const std::filesystem::path& path);
CmuDict parse_cmudict(std::istream& in);

struct RankedWord {
  std::string word;
  double intensity = 0.0;

  friend bool operator==(const RankedWord&, const RankedWord&) = default;
};

// Highest-intensity words for one emotion. Ties break by ascending word.
std::vector<RankedWord> top_k(const Lexicon& lex, Emotion e, std::size_t k,
                              bool nonsense_only);

}  // namespace bwslex
