#include "forge/types/program.hpp"

#include <algorithm>

#include "forge/error.hpp"
#include "forge/term/term.hpp"

namespace forge {

bool TypeProgram::has_function(std::string_view n, bool auxiliary) const {
  return std::any_of(defs.begin(), defs.end(), [&](const FunctionDef& d) { return d.name == n && d.auxiliary == auxiliary; });
}

bool TypeProgram::is_external(std::string_view type) const {
  return std::find(external_types.begin(), external_types.end(), type) != external_types.end();
}

std::vector<std::string> TypeProgram::primary_names() const {
  std::vector<std::string> out;
  for (const auto& d : defs) {
    if (!d.auxiliary && std::find(out.begin(), out.end(), d.name) == out.end()) out.push_back(d.name);
  }
  return out;
}

std::vector<std::string> TypeProgram::word_alphabet() const {
  if (!alphabet.empty()) return alphabet;
  std::vector<std::string> out;
  for (auto& n : primary_names()) {
    if (!framing.frames(n)) out.push_back(n);
  }
  return out;
}

const char* to_string(OverloadMode m) {
  switch (m) {
    case OverloadMode::OneType: return "one-type";
    case OverloadMode::EventuallyOneType: return "eventually-one";
    case OverloadMode::MultipleTypes: return "multi";
  }
  return "?";
}

std::optional<OverloadMode> parse_mode(std::string_view s) {
  if (s == "one-type") return OverloadMode::OneType;
  if (s == "eventually-one" || s == "eventually-one-type") return OverloadMode::EventuallyOneType;
  if (s == "multi" || s == "multiple-types") return OverloadMode::MultipleTypes;
  return std::nullopt;
}

namespace {

void expr_vars(const TermStore& store, const Expr& e, std::vector<VarId>& out) {
  if (!e.is_call()) {
    auto vs = variables_of(store, e.leaf);
    out.insert(out.end(), vs.begin(), vs.end());
    return;
  }
  for (const auto& a : e.args) expr_vars(store, a, out);
}

void check_callees(const TypeProgram& p, const Expr& e, const std::string& where) {
  if (!e.is_call()) return;
  if (!p.has_function(e.callee, false) && !p.has_function(e.callee, true)) {
    throw Error(where + ": call to undefined function '" + e.callee + "'");
  }
  for (const auto& a : e.args) check_callees(p, a, where);
}

}  // namespace

void check_well_formed(const TypeProgram& p) {
  const TermStore& store = *p.store;
  for (const auto& d : p.defs) {
    std::string where = "definition of '" + d.name + "'";
    if (d.params.empty()) throw Error(where + ": no parameters");
    if (!d.uses_typeof && d.body.is_call()) throw Error(where + ": call in a non-typeof return");
    if (p.has_function(d.name, !d.auxiliary)) {
      throw Error(where + ": name used for both a primary and an auxiliary function");
    }
    std::vector<VarId> bound;
    for (Term t : d.params) {
      auto vs = variables_of(store, t);
      bound.insert(bound.end(), vs.begin(), vs.end());
    }
    std::vector<VarId> used;
    expr_vars(store, d.body, used);
    for (VarId v : used) {
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
        throw Error(where + ": return mentions variable '" + store.var_name(v) + "' not bound by the parameters");
      }
    }
  }
  for (std::size_t i = 0; i < p.expressions.size(); ++i) {
    check_callees(p, p.expressions[i], "expression " + std::to_string(i + 1));
  }
}

}  // namespace forge
