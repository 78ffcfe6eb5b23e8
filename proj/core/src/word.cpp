#include "forge/word.hpp"

#include <algorithm>

namespace forge {

Word Framing::apply(const Word& w) const {
  Word out = prefix;
  out.insert(out.end(), w.begin(), w.end());
  out.insert(out.end(), suffix.begin(), suffix.end());
  return out;
}

bool Framing::frames(std::string_view letter) const {
  auto eq = [&](const std::string& s) { return s == letter; };
  return std::any_of(prefix.begin(), prefix.end(), eq) || std::any_of(suffix.begin(), suffix.end(), eq);
}

std::string join_word(const Word& w, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += sep;
    out += w[i];
  }
  return out;
}

Word parse_word(std::string_view text, const std::vector<std::string>& alphabet) {
  Word out;
  bool has_sep = text.find_first_of(" .,") != std::string_view::npos;
  if (!has_sep) {
    if (text.empty() || text == "eps") return out;
    bool per_char = std::all_of(text.begin(), text.end(), [&](char c) {
      return std::find(alphabet.begin(), alphabet.end(), std::string(1, c)) != alphabet.end();
    });
    if (per_char) {
      for (char c : text) out.emplace_back(1, c);
    } else {
      out.emplace_back(text);
    }
    return out;
  }
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '.' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t layer_begin = 0;
  for (std::size_t len = 1; len <= max_len && !alphabet.empty(); ++len) {
    std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const auto& a : alphabet) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

}  // namespace forge
