#include "bwslex/arpabet.hpp"

#include <algorithm>
#include <cctype>

namespace bwslex {

const std::vector<std::string>& arpabet_inventory() {
  static const std::vector<std::string> kTokens = {
      "aa", "ae", "ah", "ao", "aw", "ay", "b",  "ch", "d",  "dh",
      "eh", "er", "ey", "f",  "g",  "hh", "ih", "iy", "jh", "k",
      "l",  "m",  "n",  "ng", "ow", "oy", "p",  "r",  "s",  "sh",
      "t",  "th", "uh", "uw", "v",  "w",  "y",  "z",  "zh"};
  return kTokens;
}

bool is_arpabet_token(std::string_view token) noexcept {
  const auto& inv = arpabet_inventory();
  return std::binary_search(inv.begin(), inv.end(), token);
}

PhonemeSeq parse_phonemes(std::string_view text, std::string* bad) {
  PhonemeSeq out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    std::string tok;
    for (std::size_t j = start; j < i; ++j) {
      auto c = static_cast<unsigned char>(text[j]);
      if (std::isdigit(c)) continue;
      tok.push_back(static_cast<char>(std::tolower(c)));
    }
    if (!is_arpabet_token(tok)) {
      if (bad) *bad = std::string(text.substr(start, i - start));
      return {};
    }
    out.push_back(std::move(tok));
  }
  return out;
}

std::string join_phonemes(const PhonemeSeq& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out.push_back(' ');
    out += seq[i];
  }
  return out;
}

}  // namespace bwslex
