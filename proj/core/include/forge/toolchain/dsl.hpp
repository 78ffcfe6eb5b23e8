#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "forge/automata/automaton.hpp"
#include "forge/grammar/cfg.hpp"
#include "forge/types/lattice.hpp"
#include "forge/types/program.hpp"

namespace forge {

// Program DSL (.typ):
//   program NAME
//   mode one-type|eventually-one|multi
//   style decltype|auto
//   type g(x1, x2) [extern]      type Zero      type g/2
//   unit E                       (declares where the unit goes; default first)
//   alphabet a b c / prefix begin / suffix end
//   result eps                   (type every expression must have)
//   fn a : g(x1, x2) -> g(x2, x1)
//   aux f : g(x, y) -> typeof h(x).k
//   expr eps.a.b            expr end(b(a(begin())))
TypeProgram parse_program(std::string_view text);
std::string print_program(const TypeProgram& p);

// Pseudo-expressions: `t.f.g` chains, `f(e1, e2)` calls, `f()` is f(eps).
Expr parse_expression(const TypeProgram& p, std::string_view text);
std::string to_string(const TypeProgram& p, const Expr& e);

// Automaton DSL (.aut); see print_automaton for the canonical layout.
AutomatonSpec parse_automaton(std::string_view text);
std::string print_automaton(const AutomatonSpec& a);

// Grammar DSL (.cfg): `start S;` `S -> a S a | b S b | ;`
Cfg parse_grammar(std::string_view text);
std::string print_grammar(const Cfg& g);

std::optional<LatticePointT> parse_point_t(std::string_view text);
std::optional<LatticePointA> parse_point_a(std::string_view text);

// JSON mirrors. Terms and expressions appear in their DSL text form.
std::string to_json(const TypeProgram& p);
std::string to_json(const AutomatonSpec& a);
std::string to_json(const Cfg& g);

using Source = std::variant<TypeProgram, AutomatonSpec, Cfg>;

// Accepts DSL text or its JSON mirror; the kind comes from the extension
// hint (.typ/.aut/.cfg) or, failing that, from the content.
Source parse_source(std::string_view text, std::string_view hint = {});
std::string print_source(const Source& s);

}  // namespace forge
