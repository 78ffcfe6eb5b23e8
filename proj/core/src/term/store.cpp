#include "forge/term/store.hpp"

#include <algorithm>
#include <limits>

#include "forge/error.hpp"

namespace forge {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::vector<std::string> default_params(unsigned rank) {
  std::vector<std::string> out;
  for (unsigned i = 1; i <= rank; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

}  // namespace

TermStore::TermStore() { nodes_.push_back(Node{NodeKind::Leaf, true, 0, 0, 0, 0}); }

SymbolId TermStore::declare(std::string_view name, unsigned rank, std::vector<std::string> params) {
  if (name.empty() || name == "eps") throw Error("invalid symbol name '" + std::string(name) + "'");
  if (auto it = symbol_ids_.find(std::string(name)); it != symbol_ids_.end()) {
    auto& info = symbols_[index(it->second)];
    if (info.rank != rank) {
      throw MalformedRank("symbol '" + std::string(name) + "' redeclared with rank " +
                          std::to_string(rank) + " (was " + std::to_string(info.rank) + ")");
    }
    if (!params.empty()) set_params(it->second, std::move(params));
    return it->second;
  }
  if (params.empty()) params = default_params(rank);
  if (params.size() != rank) {
    throw MalformedRank("symbol '" + std::string(name) + "' declares " +
                        std::to_string(params.size()) + " parameters but has rank " +
                        std::to_string(rank));
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(SymbolInfo{std::string(name), rank, std::move(params)});
  symbol_ids_.emplace(std::string(name), id);
  return id;
}

void TermStore::set_params(SymbolId s, std::vector<std::string> params) {
  auto& info = symbols_[index(s)];
  if (params.size() != info.rank) throw MalformedRank("parameter list does not match rank of '" + info.name + "'");
  info.params = std::move(params);
}

std::optional<SymbolId> TermStore::find(std::string_view name) const {
  auto it = symbol_ids_.find(std::string(name));
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

SymbolId TermStore::symbol(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw UndeclaredSymbol("undeclared symbol '" + std::string(name) + "'");
}

std::vector<SymbolId> TermStore::symbols() const {
  std::vector<SymbolId> out;
  out.reserve(symbols_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) out.push_back(static_cast<SymbolId>(i));
  return out;
}

bool TermStore::all_monadic() const {
  return !symbols_.empty() &&
         std::all_of(symbols_.begin(), symbols_.end(), [](const SymbolInfo& s) { return s.rank == 1; });
}

unsigned TermStore::max_rank() const {
  unsigned r = 0;
  for (const auto& s : symbols_) r = std::max(r, s.rank);
  return r;
}

VarId TermStore::variable(std::string_view name) {
  if (auto it = var_ids_.find(std::string(name)); it != var_ids_.end()) return it->second;
  auto id = static_cast<VarId>(vars_.size());
  vars_.emplace_back(name);
  var_ids_.emplace(std::string(name), id);
  return id;
}

std::optional<VarId> TermStore::find_variable(std::string_view name) const {
  auto it = var_ids_.find(std::string(name));
  if (it == var_ids_.end()) return std::nullopt;
  return it->second;
}

Term TermStore::var(VarId v) {
  return intern(NodeKind::Var, static_cast<std::uint32_t>(v), {});
}

Term TermStore::apply(SymbolId s, std::span<const Term> children) {
  const auto& info = symbols_.at(index(s));
  if (children.size() != info.rank) {
    throw MalformedRank("symbol '" + info.name + "' has rank " + std::to_string(info.rank) +
                        " but was given " + std::to_string(children.size()) + " children");
  }
  return intern(NodeKind::Apply, static_cast<std::uint32_t>(s), children);
}

Term TermStore::intern(NodeKind kind, std::uint32_t label, std::span<const Term> children) {
  std::size_t h = mix(static_cast<std::size_t>(kind), label);
  for (Term c : children) h = mix(h, c.id);

  auto [lo, hi] = index_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    const Node& n = nodes_[it->second];
    if (n.kind != kind || n.label != label || n.arity != children.size()) continue;
    if (std::equal(children.begin(), children.end(), child_pool_.begin() + n.first_child)) {
      return Term{it->second};
    }
  }

  if (nodes_.size() >= std::numeric_limits<std::uint32_t>::max()) throw Error("term store exhausted");
  Node n{kind, kind != NodeKind::Var, static_cast<std::uint16_t>(children.size()), label,
         static_cast<std::uint32_t>(child_pool_.size()), 0};
  for (Term c : children) {
    const Node& cn = nodes_[c.id];
    n.ground = n.ground && cn.ground;
    n.depth = std::max(n.depth, cn.depth + 1);
  }
  child_pool_.insert(child_pool_.end(), children.begin(), children.end());
  auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(n);
  index_.emplace(h, id);
  return Term{id};
}

}  // namespace forge
