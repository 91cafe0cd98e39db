#include "bwslex/design.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "bwslex/errors.hpp"
#include "rng.hpp"

namespace bwslex {

namespace {

using Tuple = std::array<std::size_t, 4>;

bool holds_except(const Tuple& t, std::size_t skip, std::size_t word) {
  for (std::size_t i = 0; i < 4; ++i)
    if (i != skip && t[i] == word) return true;
  return false;
}

// Positions that currently break a constraint: the second copy of a word
// inside a tuple, or every position of a tuple that repeats an earlier one.
std::vector<std::pair<std::size_t, std::size_t>> conflicts(const std::vector<Tuple>& tuples) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::set<Tuple> seen;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const Tuple& tup = tuples[t];
    bool dup = false;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (tup[i] == tup[j]) {
          out.emplace_back(t, i);
          dup = true;
        }
    if (!dup && !seen.insert(tup).second)
      for (std::size_t i = 0; i < 4; ++i) out.emplace_back(t, i);
  }
  return out;
}

std::optional<std::vector<Tuple>> attempt(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> pool;
  pool.reserve(n * kOccurrencesPerWord);
  for (std::size_t w = 0; w < n; ++w)
    for (int c = 0; c < kOccurrencesPerWord; ++c) pool.push_back(w);
  std::shuffle(pool.begin(), pool.end(), rng);

  std::vector<Tuple> tuples(2 * n);
  for (std::size_t t = 0; t < tuples.size(); ++t)
    for (std::size_t i = 0; i < 4; ++i) tuples[t][i] = pool[4 * t + i];

  const std::size_t max_steps = 200 * n + 2000;
  for (std::size_t step = 0; step < max_steps; ++step) {
    auto bad = conflicts(tuples);
    if (bad.empty()) return tuples;
    auto [t, i] = bad[detail::uniform_index(rng, bad.size())];
    std::size_t u = detail::uniform_index(rng, tuples.size() - 1);
    if (u >= t) ++u;
    std::size_t j = detail::uniform_index(rng, 4);
    const std::size_t a = tuples[t][i];
    const std::size_t b = tuples[u][j];
    if (a == b) continue;
    // A swap must not plant a new within-tuple duplicate.
    if (holds_except(tuples[t], i, b) || holds_except(tuples[u], j, a)) continue;
    std::swap(tuples[t][i], tuples[u][j]);
  }
  return std::nullopt;
}

std::string tuple_id(Emotion e, std::size_t i) {
  std::string num = std::to_string(i);
  if (num.size() < 3) num.insert(0, 3 - num.size(), '0');
  return std::string(to_string(e)) + "-" + num;
}

}  // namespace

bool TupleItem::contains(std::string_view w) const noexcept {
  return std::find(words.begin(), words.end(), w) != words.end();
}

const EmotionBlock* StudyDesign::block(Emotion e) const noexcept {
  for (const auto& b : blocks)
    if (b.emotion == e) return &b;
  return nullptr;
}

const TupleItem* StudyDesign::find_tuple(std::string_view id) const noexcept {
  for (const auto& b : blocks)
    for (const auto& t : b.tuples)
      if (t.tuple_id == id) return &t;
  return nullptr;
}

const CheckWords& default_check_words(Emotion e) {
  static const PerEmotion<CheckWords> kChecks{{
      {{"door", "elbow"}, "happiness", "depression"},
      {{"chair", "pencil"}, "grief", "delight"},
      {{"table", "window"}, "fury", "calm"},
      {{"spoon", "curtain"}, "vomit", "delicious"},
      {{"lamp", "bottle"}, "terror", "safety"},
      {{"carpet", "shelf"}, "astonishment", "routine"},
  }};
  return kChecks[index(e)];
}

TupleItem make_attention_check(Emotion e, const std::array<WordId, 2>& neutral,
                               const WordId& related, const WordId& opposite,
                               std::uint64_t seed) {
  TupleItem t;
  t.emotion = e;
  t.tuple_id = std::string(to_string(e)) + "-check";
  t.words = {neutral[0], neutral[1], related, opposite};
  std::set<WordId> distinct(t.words.begin(), t.words.end());
  if (distinct.size() != 4)
    throw ValidationError("attention check needs four distinct words", "words");
  for (const auto& w : t.words)
    if (w.empty()) throw ValidationError("attention check word is empty", "words");
  auto rng = detail::make_rng({seed, 0xC4ECull, index(e)});
  std::shuffle(t.words.begin(), t.words.end(), rng);
  t.is_attention_check = true;
  t.check_key = CheckKey{related, opposite};
  return t;
}

StudyDesign generate_design(const std::vector<WordId>& words,
                            const std::vector<Emotion>& emotions, std::uint64_t seed,
                            const DesignOptions& options) {
  const std::size_t n = words.size();
  if (n < kMinDesignWords)
    throw ValidationError("N must be >= " + std::to_string(kMinDesignWords) + " (got " +
                              std::to_string(n) + ")",
                          "words");
  std::unordered_set<WordId> distinct(words.begin(), words.end());
  if (distinct.size() != n) throw ValidationError("design words must be unique", "words");
  if (std::any_of(words.begin(), words.end(), [](const WordId& w) { return w.empty(); }))
    throw ValidationError("design words must be non-empty", "words");
  if (options.annotators_per_tuple < 1)
    throw ValidationError("annotators_per_tuple must be >= 1", "annotators_per_tuple");

  std::vector<Emotion> ordered;
  for (Emotion e : kEmotions)
    if (std::find(emotions.begin(), emotions.end(), e) != emotions.end()) ordered.push_back(e);
  if (ordered.empty()) throw ValidationError("at least one emotion required", "emotions");

  StudyDesign d;
  d.seed = seed;
  d.annotators_per_tuple = options.annotators_per_tuple;
  d.words = words;

  for (Emotion e : ordered) {
    auto rng = detail::make_rng({seed, index(e)});
    std::optional<std::vector<Tuple>> found;
    for (int restart = 0; restart < options.max_restarts && !found; ++restart)
      found = attempt(n, rng);
    if (!found) throw DesignInfeasible(seed, n);

    EmotionBlock block;
    block.emotion = e;
    for (std::size_t t = 0; t < found->size(); ++t) {
      TupleItem item;
      item.tuple_id = tuple_id(e, t);
      item.emotion = e;
      for (std::size_t i = 0; i < 4; ++i) item.words[i] = words[(*found)[t][i]];
      block.tuples.push_back(std::move(item));
    }
    if (options.attention_checks) {
      const CheckWords& cw = default_check_words(e);
      block.tuples.push_back(make_attention_check(e, cw.neutral, cw.related, cw.opposite, seed));
    }
    d.blocks.push_back(std::move(block));
  }
  return d;
}

void validate_design(const StudyDesign& d) {
  const std::size_t n = d.words.size();
  if (n < kMinDesignWords)
    throw ValidationError("design covers fewer than " + std::to_string(kMinDesignWords) +
                              " words",
                          "words");
  if (d.annotators_per_tuple < 1)
    throw ValidationError("annotators_per_tuple must be >= 1", "annotators_per_tuple");
  std::unordered_set<WordId> word_set(d.words.begin(), d.words.end());
  if (word_set.size() != n) throw ValidationError("design words must be unique", "words");
  if (d.blocks.empty()) throw ValidationError("design has no emotions", "emotions");

  std::unordered_set<std::string> ids;
  std::set<Emotion> emotions_seen;
  for (const auto& block : d.blocks) {
    const std::string em(to_string(block.emotion));
    if (!emotions_seen.insert(block.emotion).second)
      throw ValidationError("emotion " + em + " appears twice", "emotions");
    std::set<std::array<WordId, 4>> ordered;
    std::unordered_map<WordId, int> counts;
    std::size_t regular = 0;
    for (const auto& t : block.tuples) {
      if (t.tuple_id.empty()) throw ValidationError("empty tuple_id", "tuple_id");
      if (!ids.insert(t.tuple_id).second)
        throw ValidationError("duplicate tuple_id " + t.tuple_id, "tuple_id");
      if (t.emotion != block.emotion)
        throw ValidationError("tuple " + t.tuple_id + " filed under the wrong emotion", "emotion");
      std::set<WordId> inside(t.words.begin(), t.words.end());
      if (inside.size() != 4)
        throw ValidationError("tuple " + t.tuple_id + " repeats a word", "words");
      if (t.is_attention_check != t.check_key.has_value())
        throw ValidationError("tuple " + t.tuple_id + ": check_key present iff attention check",
                              "check_key");
      if (t.is_attention_check) {
        const auto& key = *t.check_key;
        if (!t.contains(key.best_expected) || !t.contains(key.worst_expected) ||
            key.best_expected == key.worst_expected)
          throw ValidationError("tuple " + t.tuple_id + ": check_key words not in tuple",
                                "check_key");
        continue;
      }
      ++regular;
      for (const auto& w : t.words) {
        if (!word_set.count(w))
          throw ValidationError("tuple " + t.tuple_id + " uses unknown word " + w, "words");
        ++counts[w];
      }
      if (!ordered.insert(t.words).second)
        throw ValidationError("tuple " + t.tuple_id + " repeats an earlier tuple", "tuples");
    }
    if (regular != 2 * n)
      throw ValidationError(em + ": expected " + std::to_string(2 * n) + " tuples, got " +
                                std::to_string(regular),
                            "tuples");
    for (const auto& w : d.words)
      if (counts[w] != kOccurrencesPerWord)
        throw ValidationError(em + ": word " + w + " appears " + std::to_string(counts[w]) +
                                  " times, expected " + std::to_string(kOccurrencesPerWord),
                              "tuples");
  }
}

std::vector<Batch> batch_design(const StudyDesign& d, std::size_t tuples_per_batch) {
  if (tuples_per_batch < 1) throw ValidationError("tuples_per_batch must be >= 1", "tuples_per_batch");
  std::vector<Batch> batches;
  for (const auto& block : d.blocks) {
    std::vector<const TupleItem*> regular;
    const TupleItem* check = nullptr;
    for (const auto& t : block.tuples) {
      if (t.is_attention_check) {
        if (!check) check = &t;
      } else {
        regular.push_back(&t);
      }
    }
    for (std::size_t start = 0; start < regular.size(); start += tuples_per_batch) {
      Batch b;
      b.batch_id = "batch-" + std::to_string(batches.size());
      b.emotion = block.emotion;
      b.required_annotators = d.annotators_per_tuple;
      const std::size_t stop = std::min(regular.size(), start + tuples_per_batch);
      for (std::size_t i = start; i < stop; ++i) b.tuple_ids.push_back(regular[i]->tuple_id);
      if (check) {
        auto rng = detail::make_rng({d.seed, 0xBA7Cull, batches.size()});
        const std::size_t pos = detail::uniform_index(rng, b.tuple_ids.size() + 1);
        b.tuple_ids.insert(b.tuple_ids.begin() + static_cast<std::ptrdiff_t>(pos), check->tuple_id);
      }
      batches.push_back(std::move(b));
    }
  }
  return batches;
}

}  // namespace bwslex
