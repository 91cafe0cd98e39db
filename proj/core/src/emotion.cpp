#include "bwslex/emotion.hpp"

#include <string>

#include "bwslex/errors.hpp"

namespace bwslex {

namespace {
constexpr std::array<std::string_view, kNumEmotions> kNames{
    "joy", "sadness", "anger", "disgust", "fear", "surprise"};
constexpr std::array<std::string_view, kNumEmotions> kLabels{
    "Joy", "Sadness", "Anger", "Disgust", "Fear", "Surprise"};
}  // namespace

std::string_view to_string(Emotion e) noexcept { return kNames[index(e)]; }

std::string_view column_label(Emotion e) noexcept { return kLabels[index(e)]; }

std::optional<Emotion> parse_emotion(std::string_view name) noexcept {
  for (Emotion e : kEmotions) {
    std::string_view ref = kNames[index(e)];
    if (ref.size() != name.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < ref.size() && same; ++i) {
      char c = name[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      same = c == ref[i];
    }
    if (same) return e;
  }
  return std::nullopt;
}

Emotion emotion_from_string(std::string_view name) {
  if (auto e = parse_emotion(name)) return *e;
  throw ValidationError("unknown emotion '" + std::string(name) + "'", "emotion");
}

}  // namespace bwslex
