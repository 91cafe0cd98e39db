#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace bwslex::detail {

// Independent stream keyed by a tuple of integers, e.g. (seed, emotion) or
// (seed, iteration). Identical keys give identical streams.
inline std::mt19937_64 make_rng(std::initializer_list<std::uint64_t> key) {
  std::vector<std::uint32_t> words;
  words.reserve(key.size() * 2);
  for (std::uint64_t k : key) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

template <typename Rng>
std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace bwslex::detail
