#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bwslex {

// Lowercase ARPAbet tokens without stress digits, e.g. {"b", "ae", "n", "jh"}.
using PhonemeSeq = std::vector<std::string>;

// The 39-token stress-free ARPAbet inventory, sorted.
const std::vector<std::string>& arpabet_inventory();

bool is_arpabet_token(std::string_view token) noexcept;

// Splits on whitespace, lowercases and strips stress digits ("AH0" -> "ah").
// Returns the offending token through `bad` (if non-null) and an empty
// sequence when a token is not in the inventory.
PhonemeSeq parse_phonemes(std::string_view text, std::string* bad = nullptr);

std::string join_phonemes(const PhonemeSeq& seq);

}  // namespace bwslex
