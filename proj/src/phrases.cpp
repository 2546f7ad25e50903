#include "fbt/phrases.hpp"

#include <array>
#include <random>

namespace fbt {

namespace {

constexpr std::array<std::string_view, 48> kWords = {
    "a",     "an",    "at",    "be",    "by",    "do",    "go",    "he",
    "in",    "is",    "it",    "me",    "my",    "no",    "of",    "on",
    "to",    "up",    "we",    "all",   "and",   "are",   "box",   "can",
    "day",   "for",   "get",   "has",   "her",   "how",   "new",   "now",
    "old",   "see",   "the",   "two",   "way",   "who",   "call",  "home",
    "jump",  "quiz",  "text",  "very",  "with",  "zebra", "quick", "phone",
};

}  // namespace

std::vector<std::string> generate_digit_phrases(std::size_t count,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> digit(0, 9);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string s;
    for (std::size_t k = 0; k < kDigitPhraseLength; ++k) {
      s.push_back(static_cast<char>('0' + digit(rng)));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> generate_text_phrases(std::size_t count,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> length(kTextPhraseMin,
                                                    kTextPhraseMax);
  std::uniform_int_distribution<std::size_t> pick(0, kWords.size() - 1);
  std::bernoulli_distribution period(0.3);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t target = length(rng);
    std::string s;
    while (s.size() < target) {
      const auto w = kWords[pick(rng)];
      const std::size_t extra = w.size() + (s.empty() ? 0 : 1);
      if (s.size() + extra > kTextPhraseMax) {
        // Nothing fits: pad with the one-letter word when possible.
        if (s.size() + 2 <= kTextPhraseMax) {
          s += " a";
          continue;
        }
        break;
      }
      if (!s.empty()) s.push_back(' ');
      s += w;
    }
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    if (s.size() < kTextPhraseMax && period(rng)) s.push_back('.');
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> generate_phrases(MethodKind method, std::size_t count,
                                          std::uint64_t seed) {
  return method == MethodKind::Fti ? generate_text_phrases(count, seed)
                                   : generate_digit_phrases(count, seed);
}

std::vector<std::string> parse_phrase_set(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.emplace_back(line);
    pos = nl + 1;
  }
  return out;
}

}  // namespace fbt
