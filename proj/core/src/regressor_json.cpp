#include <json.hpp>

#include "bwslex/errors.hpp"
#include "bwslex/regressor.hpp"

namespace bwslex::regress {

using nlohmann::json;

std::string model_to_json(const TrainedModel& m) {
  json doc;
  doc["emotion"] = to_string(m.emotion);
  doc["rep"] = to_string(m.spec.rep);
  doc["ngram"] = m.spec.ngram;
  doc["max_len"] = m.spec.max_len;
  doc["boundary_markers"] = m.spec.boundary_markers;
  doc["learning_rate"] = m.hyper.learning_rate;
  doc["l2"] = m.hyper.l2;
  doc["epochs"] = m.hyper.epochs;
  doc["seed"] = m.hyper.seed;
  doc["bias"] = m.bias;
  // index order, so a reload reproduces the same numbering
  std::vector<std::string> grams(m.vocabulary.size());
  for (const auto& [g, i] : m.vocabulary) grams.at(i) = g;
  doc["features"] = grams;
  doc["weights"] = m.weights;
  return doc.dump(1) + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    TrainedModel m;
    m.emotion = emotion_from_string(doc.at("emotion").get<std::string>());
    auto rep = parse_rep(doc.at("rep").get<std::string>());
    if (!rep) throw ValidationError("unknown input representation", "rep");
    m.spec.rep = *rep;
    m.spec.ngram = doc.at("ngram").get<int>();
    m.spec.max_len = doc.value("max_len", kDefaultMaxLen);
    m.spec.boundary_markers = doc.value("boundary_markers", true);
    validate(m.spec);
    m.hyper.learning_rate = doc.value("learning_rate", 0.1);
    m.hyper.l2 = doc.value("l2", 1e-3);
    m.hyper.epochs = doc.value("epochs", 200);
    m.hyper.seed = doc.value("seed", std::uint64_t{0});
    m.bias = doc.at("bias").get<double>();
    const auto grams = doc.at("features").get<std::vector<std::string>>();
    m.weights = doc.at("weights").get<std::vector<double>>();
    if (grams.size() != m.weights.size())
      throw ValidationError("features and weights differ in length", "weights");
    for (std::size_t i = 0; i < grams.size(); ++i)
      if (!m.vocabulary.emplace(grams[i], i).second)
        throw ValidationError("duplicate feature '" + grams[i] + "'", "features");
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace bwslex::regress
