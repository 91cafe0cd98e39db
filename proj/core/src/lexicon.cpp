#include "bwslex/lexicon.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "bwslex/errors.hpp"
#include "csv.hpp"

namespace bwslex {

namespace {

constexpr std::size_t kLexiconColumns = 4 + kNumEmotions;

bool is_ascii_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

Lexicon::Lexicon(std::vector<LexEntry> entries) : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const LexEntry& e = entries_[i];
    if (!is_ascii_word(e.word))
      throw ValidationError("word '" + e.word + "' must be non-empty ASCII letters", "word");
    if (e.pron.empty())
      throw ValidationError("word '" + e.word + "' has an empty pronunciation", "pron");
    for (const auto& p : e.pron)
      if (!is_arpabet_token(p))
        throw ValidationError("word '" + e.word + "': unknown phoneme '" + p + "'", "pron");
    for (double v : e.intensity)
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError("word '" + e.word + "': intensity outside [0,1]", "intensity");
    if (!index_.emplace(e.word, i).second)
      throw ValidationError("duplicate word '" + e.word + "'", "word");
  }
}

const LexEntry* Lexicon::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

Lexicon Lexicon::nonsense() const {
  std::vector<LexEntry> out;
  std::copy_if(entries_.begin(), entries_.end(), std::back_inserter(out),
               [](const LexEntry& e) { return !e.is_real; });
  return Lexicon(std::move(out));
}

Lexicon Lexicon::real() const {
  std::vector<LexEntry> out;
  std::copy_if(entries_.begin(), entries_.end(), std::back_inserter(out),
               [](const LexEntry& e) { return e.is_real; });
  return Lexicon(std::move(out));
}

Lexicon parse_lexicon(std::istream& in, const std::string& source) {
  std::string line;
  if (!detail::read_line(in, line)) throw ParseError(source, 1, "missing header row");
  static const std::array<std::string_view, kLexiconColumns> expected{
      "ids", "word", "arpa pron", "real", "joy", "sadness", "anger", "disgust", "fear", "surprise"};
  const auto header = detail::split_csv(line);
  if (header.size() != kLexiconColumns)
    throw ParseError(source, 1, "header must have " + std::to_string(kLexiconColumns) + " columns");
  for (std::size_t i = 0; i < kLexiconColumns; ++i) {
    std::string name(detail::trim(header[i]));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (name != expected[i])
      throw ParseError(source, 1, "unexpected header column '" + std::string(header[i]) + "'");
  }

  std::vector<LexEntry> entries;
  std::size_t lineno = 1;
  while (detail::read_line(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto f = detail::split_csv(line);
    if (f.size() != kLexiconColumns)
      throw ParseError(source, lineno,
                       "expected " + std::to_string(kLexiconColumns) + " columns, got " +
                           std::to_string(f.size()));
    LexEntry e;
    auto id = detail::parse_int(f[0]);
    if (!id || *id < 0) throw ParseError(source, lineno, "bad id '" + f[0] + "'");
    e.id = static_cast<std::size_t>(*id);
    e.word = detail::to_lower(detail::trim(f[1]));
    if (!is_ascii_word(e.word)) throw ParseError(source, lineno, "bad word '" + f[1] + "'");
    std::string bad;
    e.pron = parse_phonemes(f[2], &bad);
    if (e.pron.empty())
      throw ParseError(source, lineno,
                       bad.empty() ? "empty pronunciation" : "unknown phoneme '" + bad + "'");
    auto real = detail::trim(f[3]);
    if (real != "0" && real != "1") throw ParseError(source, lineno, "Real must be 0 or 1");
    e.is_real = real == "1";
    for (Emotion em : kEmotions) {
      const std::string& cell = f[4 + index(em)];
      auto v = detail::parse_double(cell);
      if (!v) throw ParseError(source, lineno, "non-numeric intensity '" + cell + "'");
      if (*v < 0.0 || *v > 1.0)
        throw ParseError(source, lineno, "intensity " + cell + " outside [0,1]");
      e.intensity[index(em)] = *v;
    }
    entries.push_back(std::move(e));
  }
  try {
    return Lexicon(std::move(entries));
  } catch (const ValidationError& err) {
    throw ParseError(source, lineno, err.what());
  }
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_lexicon(in, path.string());
}

void write_lexicon(std::ostream& out, const Lexicon& lex) {
  out << "IDs,Word,ARPA Pron,Real";
  for (Emotion e : kEmotions) out << ',' << column_label(e);
  out << '\n';
  for (const auto& e : lex) {
    out << e.id << ',' << e.word << ',' << join_phonemes(e.pron) << ','
        << (e.is_real ? '1' : '0');
    for (double v : e.intensity) out << ',' << detail::format_double(v);
    out << '\n';
  }
}

void save_lexicon(const std::filesystem::path& path, const Lexicon& lex) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_lexicon(out, lex);
}

EilResource parse_eil(std::istream& in, const std::string& source) {
  EilResource res;
  std::map<std::pair<std::string, Emotion>, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (detail::read_line(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto f = detail::split_csv(line, '\t');
    if (f.size() != 3) throw ParseError(source, lineno, "expected 3 tab-separated fields");
    auto score = detail::parse_double(f[2]);
    if (!score && lineno == 1) continue;  // "term<TAB>AffectDimension<TAB>score" header
    if (!score) throw ParseError(source, lineno, "non-numeric score '" + f[2] + "'");
    auto emotion = parse_emotion(detail::trim(f[1]));
    if (!emotion) {
      ++res.skipped_other_emotion;
      continue;
    }
    if (*score < 0.0 || *score > 1.0)
      throw ParseError(source, lineno, "score " + f[2] + " outside [0,1]");
    std::string word = detail::to_lower(detail::trim(f[0]));
    if (word.empty()) throw ParseError(source, lineno, "empty word");
    if (!seen.emplace(std::pair{word, *emotion}, lineno).second)
      throw ParseError(source, lineno, "duplicate entry for '" + word + "'/" +
                                           std::string(to_string(*emotion)));
    res.entries.push_back({std::move(word), *emotion, *score});
  }
  return res;
}

EilResource load_eil(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_eil(in, path.string());
}

const PhonemeSeq* CmuDict::find(std::string_view word) const {
  auto it = pronunciations.find(detail::to_lower(word));
  return it == pronunciations.end() ? nullptr : &it->second;
}

CmuDict parse_cmudict(std::istream& in) {
  CmuDict dict;
  std::string line;
  while (detail::read_line(in, line)) {
    auto body = detail::trim(line);
    if (body.empty() || body.rfind(";;;", 0) == 0) continue;
    auto cut = body.find_first_of(" \t");
    if (cut == std::string_view::npos) {
      ++dict.malformed_lines;
      continue;
    }
    auto word = body.substr(0, cut);
    if (word.back() == ')' && word.find('(') != std::string_view::npos) continue;
    auto phones = body.substr(cut);
    // Inline comments ("# ...") appear in some distributions.
    if (auto hash = phones.find('#'); hash != std::string_view::npos)
      phones = phones.substr(0, hash);
    PhonemeSeq seq = parse_phonemes(phones);
    if (seq.empty()) {
      ++dict.malformed_lines;
      continue;
    }
    dict.pronunciations.emplace(detail::to_lower(word), std::move(seq));
  }
  return dict;
}

CmuDict load_cmudict(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_cmudict(in);
}

std::vector<RankedWord> top_k(const Lexicon& lex, Emotion e, std::size_t k,
                              bool nonsense_only) {
  std::vector<RankedWord> all;
  for (const auto& entry : lex) {
    if (nonsense_only && entry.is_real) continue;
    all.push_back({entry.word, entry[e]});
  }
  auto by_rank = [](const RankedWord& a, const RankedWord& b) {
    if (a.intensity != b.intensity) return a.intensity > b.intensity;
    return a.word < b.word;
  };
  std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), by_rank);
  all.resize(n);
  return all;
}

}  // namespace bwslex
