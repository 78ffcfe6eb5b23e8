#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace forge {

// Handle to an interned term. Equal handles from one store denote equal terms.
struct Term {
  std::uint32_t id = 0;
  friend bool operator==(Term, Term) = default;
  friend auto operator<=>(Term, Term) = default;
};

enum class SymbolId : std::uint32_t {};
enum class VarId : std::uint32_t {};

enum class NodeKind : std::uint8_t { Leaf, Var, Apply };

// Hash-consed storage for the terms of one ranked signature.
//
// Not thread-safe: a store belongs to one worker at a time. Reading from
// several threads is fine as long as nobody inserts.
class TermStore {
 public:
  TermStore();

  // Declares a symbol; redeclaring with the same rank is a no-op.
  // Rank 0 declares a class constant (a nullary generic).
  SymbolId declare(std::string_view name, unsigned rank, std::vector<std::string> params = {});
  std::optional<SymbolId> find(std::string_view name) const;
  SymbolId symbol(std::string_view name) const;
  unsigned rank(SymbolId s) const { return symbols_[index(s)].rank; }
  const std::string& name(SymbolId s) const { return symbols_[index(s)].name; }
  // Declared parameter names; defaults to x1..xr.
  const std::vector<std::string>& params(SymbolId s) const { return symbols_[index(s)].params; }
  void set_params(SymbolId s, std::vector<std::string> params);
  std::vector<SymbolId> symbols() const;
  std::size_t symbol_count() const { return symbols_.size(); }
  bool all_monadic() const;
  unsigned max_rank() const;

  VarId variable(std::string_view name);
  const std::string& var_name(VarId v) const { return vars_[static_cast<std::size_t>(v)]; }
  std::optional<VarId> find_variable(std::string_view name) const;

  Term leaf() const { return Term{0}; }
  Term var(VarId v);
  Term var(std::string_view name) { return var(variable(name)); }
  Term apply(SymbolId s, std::span<const Term> children);
  Term apply(SymbolId s, std::initializer_list<Term> children) {
    return apply(s, std::span<const Term>(children.begin(), children.size()));
  }
  Term apply(std::string_view name, std::initializer_list<Term> children) {
    return apply(symbol(name), children);
  }
  Term constant(SymbolId s) { return apply(s, std::span<const Term>{}); }

  NodeKind kind(Term t) const { return nodes_[t.id].kind; }
  bool is_leaf(Term t) const { return t.id == 0; }
  bool is_var(Term t) const { return kind(t) == NodeKind::Var; }
  bool is_apply(Term t) const { return kind(t) == NodeKind::Apply; }
  SymbolId head(Term t) const { return static_cast<SymbolId>(nodes_[t.id].label); }
  VarId var_of(Term t) const { return static_cast<VarId>(nodes_[t.id].label); }
  std::span<const Term> children(Term t) const {
    const Node& n = nodes_[t.id];
    return {child_pool_.data() + n.first_child, n.arity};
  }
  Term child(Term t, std::size_t i) const { return children(t)[i]; }
  unsigned depth(Term t) const { return nodes_[t.id].depth; }
  bool ground(Term t) const { return nodes_[t.id].ground; }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    NodeKind kind;
    bool ground;
    std::uint16_t arity;
    std::uint32_t label;
    std::uint32_t first_child;
    std::uint32_t depth;
  };
  struct SymbolInfo {
    std::string name;
    unsigned rank;
    std::vector<std::string> params;
  };

  static std::size_t index(SymbolId s) { return static_cast<std::size_t>(s); }
  Term intern(NodeKind kind, std::uint32_t label, std::span<const Term> children);

  std::vector<Node> nodes_;
  std::vector<Term> child_pool_;
  std::unordered_multimap<std::size_t, std::uint32_t> index_;
  std::vector<SymbolInfo> symbols_;
  std::unordered_map<std::string, SymbolId> symbol_ids_;
  std::vector<std::string> vars_;
  std::unordered_map<std::string, VarId> var_ids_;
};

}  // namespace forge

template <>
struct std::hash<forge::Term> {
  std::size_t operator()(forge::Term t) const noexcept { return std::hash<std::uint32_t>{}(t.id); }
};
