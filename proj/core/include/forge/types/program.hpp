#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forge/term/store.hpp"
#include "forge/word.hpp"

namespace forge {

// Expression or pseudo-expression: a term leaf, or a call whose arguments are
// again expressions. Expressions proper have the unit (or a ground type) at
// their leaves; pseudo-expressions may mention type variables.
struct Expr {
  Term leaf{};
  std::string callee;
  std::vector<Expr> args;

  bool is_call() const { return !callee.empty(); }
  static Expr term(Term t) { return Expr{t, {}, {}}; }
  static Expr call(std::string f, std::vector<Expr> args) { return Expr{Term{}, std::move(f), std::move(args)}; }
  friend bool operator==(const Expr&, const Expr&) = default;
};

struct FunctionDef {
  std::string name;
  bool auxiliary = false;
  std::vector<Term> params;
  Expr body;  // a bare term unless uses_typeof
  bool uses_typeof = false;
};

enum class OverloadMode { OneType, EventuallyOneType, MultipleTypes };

enum class TypeofStyle { Decltype, Auto };

struct TypeProgram {
  std::string name;
  std::shared_ptr<TermStore> store = std::make_shared<TermStore>();
  // Type declaration order; "eps" marks where the unit type is declared.
  std::vector<std::string> type_order;
  // Types assumed to exist in the target language (not emitted).
  std::vector<std::string> external_types;
  std::string unit_name = "E";
  std::vector<FunctionDef> defs;
  std::vector<Expr> expressions;
  OverloadMode mode = OverloadMode::OneType;
  std::vector<std::string> alphabet;  // empty: primary names minus framing
  Framing framing;
  TypeofStyle typeof_style = TypeofStyle::Decltype;
  // Type every expression must end with (a declaration like `E w = ...`).
  std::optional<Term> result_type;

  bool has_function(std::string_view name, bool auxiliary) const;
  bool is_external(std::string_view type) const;
  std::vector<std::string> primary_names() const;
  std::vector<std::string> word_alphabet() const;
};

const char* to_string(OverloadMode m);
std::optional<OverloadMode> parse_mode(std::string_view s);

// Throws forge::Error when a definition leaves the abstract syntax (return
// mentions variables the parameters do not bind, bad arity, ...).
void check_well_formed(const TypeProgram& p);

}  // namespace forge
