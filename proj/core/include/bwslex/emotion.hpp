#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace bwslex {

enum class Emotion : std::uint8_t { joy, sadness, anger, disgust, fear, surprise };

inline constexpr std::size_t kNumEmotions = 6;

// Canonical iteration order.
inline constexpr std::array<Emotion, kNumEmotions> kEmotions{
    Emotion::joy,     Emotion::sadness, Emotion::anger,
    Emotion::disgust, Emotion::fear,    Emotion::surprise};

constexpr std::size_t index(Emotion e) noexcept {
  return static_cast<std::size_t>(e);
}

// Lowercase name, e.g. "joy".
std::string_view to_string(Emotion e) noexcept;

// Capitalized column label used in lexicon headers, e.g. "Joy".
std::string_view column_label(Emotion e) noexcept;

// Case-insensitive lookup of a lowercase or capitalized name.
std::optional<Emotion> parse_emotion(std::string_view name) noexcept;

// Like parse_emotion but throws ValidationError on unknown names.
Emotion emotion_from_string(std::string_view name);

// A value per emotion, indexed in canonical order.
template <typename T>
using PerEmotion = std::array<T, kNumEmotions>;

using Intensities = PerEmotion<double>;

}  // namespace bwslex
