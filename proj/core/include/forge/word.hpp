#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace forge {

// Letters are names (fluent method names), so a word is a list of them.
using Word = std::vector<std::string>;

// Fixed letters wrapped around every word (e.g. begin/end, or the $ terminator).
struct Framing {
  Word prefix;
  Word suffix;

  bool empty() const { return prefix.empty() && suffix.empty(); }
  Word apply(const Word& w) const;
  bool frames(std::string_view letter) const;

  friend bool operator==(const Framing&, const Framing&) = default;
};

std::string join_word(const Word& w, std::string_view sep = " ");

// Splits on spaces, dots or commas; a separator-free string is split per
// character when every character is a letter of `alphabet`.
Word parse_word(std::string_view text, const std::vector<std::string>& alphabet);

// All words over `alphabet` of length <= max_len in length-lexicographic order.
std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t max_len);

}  // namespace forge
