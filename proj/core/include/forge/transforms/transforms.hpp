#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "forge/automata/automaton.hpp"
#include "forge/types/lattice.hpp"
#include "forge/types/program.hpp"

namespace forge {

// U_k = Succ^k(Zero); declares Zero/0 and Succ/1 in the store when missing.
Term unary_type(TermStore& store, std::size_t k);

struct ConversionReport {
  std::string conversion;
  std::string source_point;
  std::string target_point;
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t definitions = 0;
  std::size_t stack_symbols = 0;
};

template <typename T>
struct Converted {
  T result;
  ConversionReport report;
};

// Per-word tree automaton simulating a tape machine on `input`.
Converted<AutomatonSpec> tm_to_ta(const AutomatonSpec& tm, const Word& input);

// The joiner tree O(left-reversed, center, right) for a tape around its head.
Term tape_to_tree(const AutomatonSpec& ta, const std::vector<std::string>& left_reversed, const std::string& center,
                  const std::vector<std::string>& right);

// One auxiliary function per state; one expression per initial storage tree
// (the automaton's own when the list is empty).
Converted<TypeProgram> ta_to_typeof_program(const AutomatonSpec& ta, std::span<const Term> inputs = {});

// tm_to_ta for every word, collected into one program.
Converted<TypeProgram> tm_to_typeof_program(const AutomatonSpec& tm, std::span<const Word> words);

Converted<AutomatonSpec> rudimentary_to_ta(const TypeProgram& p);

Converted<AutomatonSpec> fluent_to_dpda(const TypeProgram& p);

// Reads the type encoded at the top of a fluent DPDA stack.
Term decode_fluent_stack(const AutomatonSpec& dpda, const TypeProgram& source, Term stack);

struct TaDpda {
  AutomatonSpec dpda;
  // stack symbol r<i> stands for rules[i]; rules live in the source store
  std::vector<RewriteRule> rules;
  std::shared_ptr<TermStore> source_store;
  ConversionReport report;

  // Folds the stack's rules from the bottom into the emulated storage tree.
  Term decode(Term stack) const;
  bool is_main_state(StateId s) const { return index(s) < main_states; }
  std::size_t main_states = 0;
};

TaDpda ta_to_dpda(const AutomatonSpec& ta);

Converted<AutomatonSpec> polyadic_to_dyadic(const AutomatonSpec& ta);

}  // namespace forge
