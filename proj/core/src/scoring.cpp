#include "bwslex/scoring.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "bwslex/errors.hpp"
#include "bwslex/stats.hpp"
#include "csv.hpp"
#include "rng.hpp"

namespace bwslex {

namespace {

// Hash lookup by tuple id; StudyDesign::find_tuple is a linear scan.
class TupleIndex {
 public:
  explicit TupleIndex(const StudyDesign& design) {
    for (const auto& b : design.blocks)
      for (const auto& t : b.tuples) map_.emplace(t.tuple_id, &t);
  }

  const TupleItem* find(std::string_view id) const {
    auto it = map_.find(id);
    return it == map_.end() ? nullptr : it->second;
  }

  const TupleItem& at(const Judgment& j) const {
    const TupleItem* t = find(j.tuple_id);
    if (!t) throw ValidationError("judgment references unknown tuple " + j.tuple_id, "tuple_id");
    return *t;
  }

 private:
  std::unordered_map<std::string_view, const TupleItem*> map_;
};

}  // namespace

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  text = detail::trim(text);
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail[8] = {0};
  const std::string buf(text);
  const int got =
      std::sscanf(buf.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%7s", &y, &mo, &d, &h, &mi, &s, tail);
  if (got != 7) return std::nullopt;
  const std::string_view suffix(tail);
  if (suffix != "Z" && suffix != "+00:00") return std::nullopt;
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

void validate_judgment(const Judgment& j, const TupleItem& tuple) {
  if (j.best == j.worst) throw ValidationError("best and worst are the same word", "worst");
  if (!tuple.contains(j.best))
    throw ValidationError("best '" + j.best + "' is not in tuple " + tuple.tuple_id, "best");
  if (!tuple.contains(j.worst))
    throw ValidationError("worst '" + j.worst + "' is not in tuple " + tuple.tuple_id, "worst");
  if (j.emotion != tuple.emotion)
    throw ValidationError("judgment emotion does not match tuple " + tuple.tuple_id, "emotion");
}

void write_judgments(std::ostream& out, const std::vector<Judgment>& judgments,
                     const StudyDesign* with_check_column) {
  out << "annotator_id,tuple_id,emotion,best,worst,timestamp_iso8601";
  if (with_check_column) out << ",is_attention_check";
  out << '\n';
  std::optional<TupleIndex> idx;
  if (with_check_column) idx.emplace(*with_check_column);
  for (const auto& j : judgments) {
    std::vector<std::string> f{j.annotator_id, j.tuple_id, std::string(to_string(j.emotion)),
                               j.best,         j.worst,    format_timestamp(j.timestamp)};
    if (with_check_column) {
      const TupleItem* t = idx->find(j.tuple_id);
      f.push_back(t && t->is_attention_check ? "1" : "0");
    }
    out << detail::join_csv(f) << '\n';
  }
}

std::vector<Judgment> read_judgments(std::istream& in, const std::string& source) {
  std::string line;
  if (!detail::read_line(in, line)) throw ParseError(source, 1, "missing header row");
  const auto header = detail::split_csv(line);
  if (header.size() < 6 || header[0] != "annotator_id")
    throw ParseError(source, 1, "unexpected judgment log header");
  std::vector<Judgment> out;
  std::size_t lineno = 1;
  while (detail::read_line(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto f = detail::split_csv(line);
    if (f.size() != header.size())
      throw ParseError(source, lineno, "expected " + std::to_string(header.size()) + " columns");
    Judgment j;
    j.annotator_id = f[0];
    j.tuple_id = f[1];
    auto e = parse_emotion(f[2]);
    if (!e) throw ParseError(source, lineno, "unknown emotion '" + f[2] + "'");
    j.emotion = *e;
    j.best = f[3];
    j.worst = f[4];
    auto ts = parse_timestamp(f[5]);
    if (!ts) throw ParseError(source, lineno, "bad timestamp '" + f[5] + "'");
    j.timestamp = *ts;
    if (j.annotator_id.empty() || j.tuple_id.empty())
      throw ParseError(source, lineno, "empty annotator_id or tuple_id");
    out.push_back(std::move(j));
  }
  return out;
}

void sort_judgments(std::vector<Judgment>& judgments) {
  std::stable_sort(judgments.begin(), judgments.end(), [](const Judgment& a, const Judgment& b) {
    return std::tie(a.emotion, a.tuple_id, a.annotator_id, a.timestamp) <
           std::tie(b.emotion, b.tuple_id, b.annotator_id, b.timestamp);
  });
}

FilterResult filter_annotators(const std::vector<Judgment>& judgments, const StudyDesign& design) {
  const TupleIndex idx(design);
  std::set<std::string> failed, checked, all;
  for (const auto& j : judgments) {
    const TupleItem& t = idx.at(j);
    validate_judgment(j, t);
    all.insert(j.annotator_id);
    if (!t.is_attention_check) continue;
    checked.insert(j.annotator_id);
    if (j.best != t.check_key->best_expected || j.worst != t.check_key->worst_expected)
      failed.insert(j.annotator_id);
  }
  FilterResult r;
  r.discarded.assign(failed.begin(), failed.end());
  for (const auto& a : all)
    if (!checked.count(a)) r.unchecked.push_back(a);
  for (const auto& j : judgments) {
    if (failed.count(j.annotator_id)) continue;
    if (idx.at(j).is_attention_check) continue;
    r.kept.push_back(j);
  }
  return r;
}

ScoreSlice aggregate(const std::vector<Judgment>& judgments, const StudyDesign& design,
                     Emotion emotion) {
  const TupleIndex idx(design);
  ScoreSlice slice;
  for (const auto& j : judgments) {
    if (j.emotion != emotion) continue;
    const TupleItem& t = idx.at(j);
    if (t.is_attention_check) continue;
    for (const auto& w : t.words) ++slice[w].n_judgments;
    ++slice[j.best].n_best;
    ++slice[j.worst].n_worst;
  }
  for (auto& [word, s] : slice) {
    s.raw = static_cast<double>(s.n_best - s.n_worst) / s.n_judgments;
    s.scaled = (s.raw + 1.0) / 2.0;
  }
  return slice;
}

const WordScore* ScoreTable::find(const WordId& w, Emotion e) const {
  auto it = slices.find(e);
  if (it == slices.end()) return nullptr;
  auto jt = it->second.find(w);
  return jt == it->second.end() ? nullptr : &jt->second;
}

ScoreTable aggregate_all(const std::vector<Judgment>& judgments, const StudyDesign& design) {
  ScoreTable table;
  for (const auto& block : design.blocks) {
    auto slice = aggregate(judgments, design, block.emotion);
    if (!slice.empty()) table.slices.emplace(block.emotion, std::move(slice));
  }
  return table;
}

Lexicon scores_to_lexicon(const ScoreTable& table, const Lexicon& reference) {
  std::set<WordId> scored;
  for (const auto& [e, slice] : table.slices)
    for (const auto& [w, s] : slice) scored.insert(w);
  std::vector<LexEntry> out;
  for (const auto& w : scored) {
    const LexEntry* ref = reference.find(w);
    if (!ref) throw ValidationError("scored word '" + w + "' missing from reference lexicon", "word");
    LexEntry e = *ref;
    for (Emotion em : kEmotions) {
      const WordScore* s = table.find(w, em);
      if (!s)
        throw ValidationError("word '" + w + "' has no " + std::string(to_string(em)) + " score",
                              "emotion");
      e.intensity[index(em)] = s->scaled;
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const LexEntry& a, const LexEntry& b) { return a.id < b.id; });
  return Lexicon(std::move(out));
}

void write_scores_long(std::ostream& out, const ScoreTable& table) {
  out << "word,emotion,raw,scaled,n_judgments\n";
  for (const auto& [e, slice] : table.slices)
    for (const auto& [w, s] : slice)
      out << detail::csv_field(w) << ',' << to_string(e) << ',' << detail::format_fixed(s.raw, 6)
          << ',' << detail::format_fixed(s.scaled, 6) << ',' << s.n_judgments << '\n';
}

std::optional<Correlations> correlate_bins(const std::vector<Judgment>& bin_a,
                                           const std::vector<Judgment>& bin_b,
                                           const StudyDesign& design, Emotion emotion) {
  const auto sa = aggregate(bin_a, design, emotion);
  const auto sb = aggregate(bin_b, design, emotion);
  std::vector<double> xa, xb;
  for (const auto& [w, s] : sa) {
    auto it = sb.find(w);
    if (it == sb.end()) continue;
    xa.push_back(s.scaled);
    xb.push_back(it->second.scaled);
  }
  if (xa.size() < 3) return std::nullopt;
  try {
    return Correlations{stats::spearman(xa, xb), stats::pearson(xa, xb)};
  } catch (const DegenerateInput&) {
    return std::nullopt;
  }
}

ShrSlice split_half_reliability(const std::vector<Judgment>& judgments, const StudyDesign& design,
                                Emotion emotion, int iterations, std::uint64_t seed) {
  if (iterations < 1) throw ValidationError("iterations must be >= 1", "iterations");
  // Tuple -> judgments, both in canonical order so results do not depend on
  // the order of the input log.
  const TupleIndex idx(design);
  std::map<std::string, std::vector<Judgment>> by_tuple;
  for (const auto& j : judgments) {
    if (j.emotion != emotion) continue;
    if (idx.at(j).is_attention_check) continue;
    by_tuple[j.tuple_id].push_back(j);
  }
  for (auto& [id, js] : by_tuple) sort_judgments(js);

  ShrSlice out;
  out.emotion = emotion;
  double sum_rho = 0.0, sum_r = 0.0;
  for (int it = 0; it < iterations; ++it) {
    auto rng = detail::make_rng({seed, index(emotion), static_cast<std::uint64_t>(it)});
    std::vector<Judgment> bin_a, bin_b;
    for (const auto& [id, js] : by_tuple) {
      const std::size_t k = js.size();
      const std::size_t to_a = k == 1 ? 1 : 1 + detail::uniform_index(rng, 2);
      std::vector<std::size_t> order(k);
      for (std::size_t i = 0; i < k; ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t i = 0; i < k; ++i)
        (i < to_a ? bin_a : bin_b).push_back(js[order[i]]);
    }
    auto c = correlate_bins(bin_a, bin_b, design, emotion);
    if (!c) {
      ++out.skipped;
      continue;
    }
    sum_rho += c->spearman;
    sum_r += c->pearson;
    ++out.iterations;
  }
  if (out.skipped * 2 > iterations)
    throw DegenerateInput("split-half reliability for " + std::string(to_string(emotion)) + ": " +
                          std::to_string(out.skipped) + " of " + std::to_string(iterations) +
                          " iterations had fewer than three shared words");
  out.spearman = sum_rho / out.iterations;
  out.pearson = sum_r / out.iterations;
  return out;
}

ShrResult split_half_reliability_all(const std::vector<Judgment>& judgments,
                                     const StudyDesign& design, int iterations,
                                     std::uint64_t seed) {
  ShrResult r;
  r.iterations = iterations;
  r.seed = seed;
  for (const auto& block : design.blocks)
    r.slices.push_back(split_half_reliability(judgments, design, block.emotion, iterations, seed));
  return r;
}

}  // namespace bwslex
