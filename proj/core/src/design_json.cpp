#include <algorithm>

#include <json.hpp>

#include "bwslex/design.hpp"
#include "bwslex/errors.hpp"

namespace bwslex {

using nlohmann::json;

std::string design_to_json(const StudyDesign& d, int indent) {
  json doc;
  doc["seed"] = d.seed;
  doc["annotators_per_tuple"] = d.annotators_per_tuple;
  doc["words"] = d.words;
  json emotions = json::array();
  for (const auto& block : d.blocks) {
    json tuples = json::array();
    for (const auto& t : block.tuples) {
      json jt;
      jt["tuple_id"] = t.tuple_id;
      jt["words"] = t.words;
      jt["is_attention_check"] = t.is_attention_check;
      if (t.check_key)
        jt["check_key"] = {{"best_expected", t.check_key->best_expected},
                           {"worst_expected", t.check_key->worst_expected}};
      tuples.push_back(std::move(jt));
    }
    emotions.push_back({{"emotion", to_string(block.emotion)}, {"tuples", std::move(tuples)}});
  }
  doc["emotions"] = std::move(emotions);
  return doc.dump(indent) + "\n";
}

StudyDesign design_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("design is not valid JSON: ") + e.what());
  }
  try {
    StudyDesign d;
    d.seed = doc.at("seed").get<std::uint64_t>();
    d.annotators_per_tuple = doc.value("annotators_per_tuple", 3);
    for (const auto& je : doc.at("emotions")) {
      EmotionBlock block;
      block.emotion = emotion_from_string(je.at("emotion").get<std::string>());
      for (const auto& jt : je.at("tuples")) {
        TupleItem t;
        t.tuple_id = jt.at("tuple_id").get<std::string>();
        t.emotion = block.emotion;
        const auto& ws = jt.at("words");
        if (!ws.is_array() || ws.size() != 4)
          throw ValidationError("tuple " + t.tuple_id + " must have exactly 4 words", "words");
        for (std::size_t i = 0; i < 4; ++i) t.words[i] = ws[i].get<std::string>();
        t.is_attention_check = jt.value("is_attention_check", false);
        if (jt.contains("check_key") && !jt["check_key"].is_null())
          t.check_key = CheckKey{jt["check_key"].at("best_expected").get<std::string>(),
                                 jt["check_key"].at("worst_expected").get<std::string>()};
        block.tuples.push_back(std::move(t));
      }
      d.blocks.push_back(std::move(block));
    }
    if (doc.contains("words")) {
      d.words = doc["words"].get<std::vector<std::string>>();
    } else {
      // First-seen order over the regular tuples.
      for (const auto& block : d.blocks)
        for (const auto& t : block.tuples) {
          if (t.is_attention_check) continue;
          for (const auto& w : t.words)
            if (std::find(d.words.begin(), d.words.end(), w) == d.words.end())
              d.words.push_back(w);
        }
    }
    return d;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed design document: ") + e.what());
  }
}

}  // namespace bwslex
