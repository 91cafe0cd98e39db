#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bwslex/design.hpp"
#include "bwslex/lexicon.hpp"
#include "bwslex/scoring.hpp"

namespace bwslex {

// Ground-truth intensity per (word, emotion).
using Truth = std::map<std::pair<WordId, Emotion>, double>;

Truth truth_from_lexicon(const Lexicon& lex);

// A synthetic annotator: perceives truth + N(0, sigma) and picks the argmax
// as best and the argmin as worst. Attention checks are answered correctly
// with probability 1 - failure_rate.
struct SimAnnotator {
  std::string annotator_id;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  double failure_rate = 0.0;
};

// Three annotators "sim-0".."sim-2" with seeds derived from `seed`.
std::vector<SimAnnotator> make_annotators(double sigma, std::uint64_t seed,
                                          double failure_rate = 0.0, int count = 3);

// Every annotator judges every tuple of the design, block by block in design
// order. Timestamps count up one second per judgment from a fixed epoch.
// Throws ValidationError if truth lacks a design word.
std::vector<Judgment> simulate_judgments(const StudyDesign& design, const Truth& truth,
                                         const std::vector<SimAnnotator>& annotators);

}  // namespace bwslex
