#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/term/term.hpp"
#include "forge/types/program.hpp"

namespace forge {

inline constexpr std::size_t kDefaultTypeCap = 4096;

struct CheckResult {
  enum class Kind { Typed, TypedSet, ErrorType, Ambiguous, IllTyped, FuelExhausted };

  Kind kind = Kind::IllTyped;
  Term type{};               // Typed
  std::vector<Term> types;   // TypedSet, and the offending set for ErrorType/Ambiguous
  std::size_t position = 0;  // 1-based post-order index of the failing call
  std::size_t applications = 0;
  std::string message;

  bool typed() const { return kind == Kind::Typed || kind == Kind::TypedSet; }
};

const char* to_string(CheckResult::Kind k);

struct CheckOptions {
  std::optional<OverloadMode> mode;  // defaults to the program's mode
  std::size_t fuel = 100000;
  std::size_t type_cap = kDefaultTypeCap;
  bool erasure_lint = false;
};

struct Application {
  enum class Kind { Direct, Pending, NoMatch };
  Kind kind = Kind::NoMatch;
  Term type{};
  Expr pending;  // typeof body with the substitution applied to its leaves
};

Application apply_function(TermStore& store, const FunctionDef& def, std::span<const Term> args);

// Types a ground pseudo-expression. Returns the set of result types; the
// one-type rule applies at every call node.
CheckResult resolve_typeof(const TypeProgram& p, const Expr& pseudo, const CheckOptions& opts = {});

CheckResult typecheck(const TypeProgram& p, const Expr& e, const CheckOptions& opts = {});

// Chain 𝜀.prefix.w.suffix; the empty word gives the bare unit.
Expr word_to_expression(const TypeProgram& p, const Word& w);
// Inverse of word_to_expression; throws on call trees with more than one argument.
Word expression_to_word(const TypeProgram& p, const Expr& e);

CheckResult check_word(const TypeProgram& p, const Word& w, const CheckOptions& opts = {});

// Names whose definitions collide after erasing type arguments.
std::vector<std::string> erasure_conflicts(const TypeProgram& p);

}  // namespace forge
