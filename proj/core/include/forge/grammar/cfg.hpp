#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "forge/types/program.hpp"
#include "forge/word.hpp"

namespace forge {

struct Production {
  std::string lhs;
  std::vector<std::string> rhs;  // empty = the empty word
  friend bool operator==(const Production&, const Production&) = default;
  friend auto operator<=>(const Production&, const Production&) = default;
};

struct Cfg {
  std::vector<std::string> terminals;
  std::vector<std::string> variables;
  std::string start;
  std::vector<Production> rules;

  bool is_terminal(std::string_view s) const;
  bool is_variable(std::string_view s) const;
  // Throws when terminals and variables overlap, the start is missing, a rule
  // mentions an unknown symbol, or '$' is used.
  void check() const;
};

// Every rule has the form A -> a B1..Bk with Bi != start, or start -> eps.
bool is_gnf(const Cfg& g);

Cfg to_gnf(const Cfg& g);

// One monadic type per variable plus '$'; words are checked as eps.w.$.
TypeProgram gnf_to_program(const Cfg& g, OverloadMode mode = OverloadMode::EventuallyOneType);

bool cyk_membership(const Cfg& g, const Word& w);

std::vector<Word> enumerate_words(const Cfg& g, std::size_t max_len);

}  // namespace forge
