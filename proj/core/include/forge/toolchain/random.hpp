#pragma once

#include <cstdint>

#include "forge/automata/automaton.hpp"
#include "forge/grammar/cfg.hpp"
#include "forge/types/program.hpp"

namespace forge {

struct RandomLimits {
  unsigned max_types = 6;
  unsigned max_functions = 10;  // definitions, primary and auxiliary together
  unsigned letters = 3;
  unsigned max_depth = 2;
};

// Monadic, rudimentary-typeof, one-type; definitions of one name never
// overlap and auxiliary forwarding is acyclic.
TypeProgram random_fluent_program(std::uint64_t seed, const RandomLimits& lim = {});

// Unary functions over ranks 0..2, possibly deep or non-linear patterns,
// rudimentary typeof; same determinism guarantees as above.
TypeProgram random_rudimentary_program(std::uint64_t seed, const RandomLimits& lim = {});

// Real-time deterministic tree automaton whose left-hand sides are a
// variable, the leaf, or a symbol over distinct variables.
AutomatonSpec random_restricted_ta(std::uint64_t seed, const RandomLimits& lim = {});

// Grammar over {a, b} with up to `max_vars` variables.
Cfg random_cfg(std::uint64_t seed, unsigned max_vars = 4);

}  // namespace forge
