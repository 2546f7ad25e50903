#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fbt/layout.hpp"

namespace fbt {

// Trial phrase sets. Digit entry uses 10-digit numbers; finger-text entry
// uses short sentence-case word sequences of 9 to 20 characters.
inline constexpr std::size_t kDigitPhraseLength = 10;
inline constexpr std::size_t kTextPhraseMin = 9;
inline constexpr std::size_t kTextPhraseMax = 20;

std::vector<std::string> generate_digit_phrases(std::size_t count,
                                                std::uint64_t seed);
std::vector<std::string> generate_text_phrases(std::size_t count,
                                               std::uint64_t seed);
std::vector<std::string> generate_phrases(MethodKind method, std::size_t count,
                                          std::uint64_t seed);

// One phrase per line; blank lines and trailing CR are dropped.
std::vector<std::string> parse_phrase_set(std::string_view text);

}  // namespace fbt
