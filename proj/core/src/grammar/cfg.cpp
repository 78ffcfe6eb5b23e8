#include "forge/grammar/cfg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "forge/error.hpp"

namespace forge {

namespace {

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

using Rhs = std::vector<std::string>;
using RuleMap = std::map<std::string, std::set<Rhs>>;

class Builder {
 public:
  explicit Builder(const Cfg& g) : terminals_(g.terminals), order_(g.variables), start_(g.start) {
    for (const auto& v : g.variables) rules_[v];
    for (const auto& r : g.rules) rules_[r.lhs].insert(r.rhs);
  }

  bool is_terminal(const std::string& s) const { return contains(terminals_, s); }

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int i = 1; contains(order_, name) || contains(terminals_, name); ++i) name = base + std::to_string(i);
    order_.push_back(name);
    rules_[name];
    return name;
  }

  void new_start() {
    std::string s = fresh(start_ + "0");
    rules_[s].insert(Rhs{start_});
    // keep the start first in the variable order
    order_.pop_back();
    order_.insert(order_.begin(), s);
    start_ = s;
  }

  void remove_epsilon() {
    std::set<std::string> nullable;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [a, alts] : rules_) {
        if (nullable.count(a) != 0) continue;
        for (const auto& rhs : alts) {
          if (std::all_of(rhs.begin(), rhs.end(), [&](const std::string& s) { return nullable.count(s) != 0; })) {
            nullable.insert(a);
            changed = true;
            break;
          }
        }
      }
    }
    RuleMap out;
    for (const auto& [a, alts] : rules_) {
      auto& dst = out[a];
      for (const auto& rhs : alts) {
        std::vector<std::size_t> opt;
        for (std::size_t i = 0; i < rhs.size(); ++i) {
          if (nullable.count(rhs[i]) != 0) opt.push_back(i);
        }
        for (std::size_t mask = 0; mask < (std::size_t{1} << opt.size()); ++mask) {
          Rhs r;
          std::size_t k = 0;
          for (std::size_t i = 0; i < rhs.size(); ++i) {
            bool drop = k < opt.size() && opt[k] == i && ((mask >> k) & 1U) != 0;
            if (k < opt.size() && opt[k] == i) ++k;
            if (!drop) r.push_back(rhs[i]);
          }
          if (!r.empty()) dst.insert(r);
        }
      }
    }
    if (nullable.count(start_) != 0) out[start_].insert(Rhs{});
    rules_ = std::move(out);
  }

  bool is_unit(const Rhs& r) const { return r.size() == 1 && !is_terminal(r[0]); }

  void remove_units() {
    RuleMap out;
    for (const auto& a : order_) {
      std::set<std::string> reach{a};
      std::vector<std::string> stack{a};
      while (!stack.empty()) {
        std::string b = stack.back();
        stack.pop_back();
        for (const auto& rhs : rules_[b]) {
          if (is_unit(rhs) && reach.insert(rhs[0]).second) stack.push_back(rhs[0]);
        }
      }
      auto& dst = out[a];
      for (const auto& b : reach) {
        for (const auto& rhs : rules_[b]) {
          if (!is_unit(rhs)) dst.insert(rhs);
        }
      }
    }
    rules_ = std::move(out);
  }

  void remove_useless() {
    std::set<std::string> gen;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [a, alts] : rules_) {
        if (gen.count(a) != 0) continue;
        for (const auto& rhs : alts) {
          if (std::all_of(rhs.begin(), rhs.end(),
                          [&](const std::string& s) { return is_terminal(s) || gen.count(s) != 0; })) {
            gen.insert(a);
            changed = true;
            break;
          }
        }
      }
    }
    RuleMap kept;
    for (const auto& [a, alts] : rules_) {
      if (gen.count(a) == 0) continue;
      for (const auto& rhs : alts) {
        if (std::all_of(rhs.begin(), rhs.end(), [&](const std::string& s) { return is_terminal(s) || gen.count(s) != 0; })) {
          kept[a].insert(rhs);
        }
      }
    }
    std::set<std::string> reach{start_};
    std::vector<std::string> stack{start_};
    while (!stack.empty()) {
      std::string a = stack.back();
      stack.pop_back();
      for (const auto& rhs : kept[a]) {
        for (const auto& s : rhs) {
          if (!is_terminal(s) && reach.insert(s).second) stack.push_back(s);
        }
      }
    }
    RuleMap out;
    std::vector<std::string> order;
    for (const auto& v : order_) {
      if (reach.count(v) == 0 || (v != start_ && kept[v].empty())) continue;
      order.push_back(v);
      out[v] = kept[v];
    }
    if (!contains(order, start_)) {
      order.insert(order.begin(), start_);
      out[start_];
    }
    order_ = std::move(order);
    rules_ = std::move(out);
  }

  // Terminals after the first position become variables T -> a.
  void isolate_terminals() {
    std::map<std::string, std::string> proxy;
    RuleMap out;
    auto snapshot = order_;
    for (const auto& a : snapshot) {
      for (auto rhs : rules_[a]) {
        for (std::size_t i = 1; i < rhs.size(); ++i) {
          if (!is_terminal(rhs[i])) continue;
          auto it = proxy.find(rhs[i]);
          if (it == proxy.end()) it = proxy.emplace(rhs[i], fresh("T_" + rhs[i])).first;
          rhs[i] = it->second;
        }
        out[a].insert(rhs);
      }
    }
    for (const auto& [t, v] : proxy) out[v].insert(Rhs{t});
    rules_ = std::move(out);
  }

  std::size_t rank_of(const std::string& v) const {
    return static_cast<std::size_t>(std::find(order_.begin(), order_.end(), v) - order_.begin());
  }

  // Replaces a leading variable b of the rules of a by the alternatives of b.
  void expand_leading(const std::string& a, const std::function<bool(const std::string&)>& which) {
    bool changed = true;
    while (changed) {
      changed = false;
      std::set<Rhs> next;
      for (const auto& rhs : rules_[a]) {
        if (!rhs.empty() && !is_terminal(rhs[0]) && which(rhs[0])) {
          for (const auto& beta : rules_[rhs[0]]) {
            Rhs r = beta;
            r.insert(r.end(), rhs.begin() + 1, rhs.end());
            next.insert(r);
          }
          changed = true;
        } else {
          next.insert(rhs);
        }
      }
      rules_[a] = std::move(next);
      if (rules_[a].size() > 200000) throw Error("grammar blow-up during normal form conversion");
    }
  }

  void greibach() {
    auto originals = order_;
    std::vector<std::string> tails;
    for (std::size_t i = 0; i < originals.size(); ++i) {
      const std::string& ai = originals[i];
      expand_leading(ai, [&](const std::string& b) { return rank_of(b) < i && contains(originals, b); });
      std::vector<Rhs> rec;
      std::vector<Rhs> base;
      for (const auto& rhs : rules_[ai]) {
        if (!rhs.empty() && rhs[0] == ai) {
          rec.emplace_back(rhs.begin() + 1, rhs.end());
        } else {
          base.push_back(rhs);
        }
      }
      if (rec.empty()) continue;
      std::string z = fresh("Z_" + ai);
      tails.push_back(z);
      std::set<Rhs> a_rules;
      for (const auto& b : base) {
        a_rules.insert(b);
        Rhs bz = b;
        bz.push_back(z);
        a_rules.insert(bz);
      }
      std::set<Rhs> z_rules;
      for (const auto& r : rec) {
        z_rules.insert(r);
        Rhs rz = r;
        rz.push_back(z);
        z_rules.insert(rz);
      }
      rules_[ai] = std::move(a_rules);
      rules_[z] = std::move(z_rules);
    }
    for (std::size_t i = originals.size(); i-- > 0;) {
      expand_leading(originals[i], [&](const std::string&) { return true; });
    }
    for (const auto& z : tails) expand_leading(z, [&](const std::string&) { return true; });
  }

  Cfg result() const {
    Cfg g;
    g.terminals = terminals_;
    g.start = start_;
    g.variables = order_;
    for (const auto& v : order_) {
      auto it = rules_.find(v);
      if (it == rules_.end()) continue;
      for (const auto& rhs : it->second) g.rules.push_back(Production{v, rhs});
    }
    return g;
  }

 private:
  std::vector<std::string> terminals_;
  std::vector<std::string> order_;
  std::string start_;
  RuleMap rules_;
};

}  // namespace

bool Cfg::is_terminal(std::string_view s) const { return contains(terminals, s); }
bool Cfg::is_variable(std::string_view s) const { return contains(variables, s); }

void Cfg::check() const {
  if (start.empty() || !is_variable(start)) throw Error("grammar start symbol '" + start + "' is not a variable");
  for (const auto& t : terminals) {
    if (t == "$") throw Error("'$' is reserved and cannot be a terminal");
    if (is_variable(t)) throw Error("'" + t + "' is both a terminal and a variable");
  }
  for (const auto& r : rules) {
    if (!is_variable(r.lhs)) throw Error("rule for unknown variable '" + r.lhs + "'");
    for (const auto& s : r.rhs) {
      if (s == "$") throw Error("'$' is reserved and cannot appear in rules");
      if (!is_variable(s) && !is_terminal(s)) throw Error("unknown grammar symbol '" + s + "'");
    }
  }
}

bool is_gnf(const Cfg& g) {
  for (const auto& r : g.rules) {
    if (r.rhs.empty()) {
      if (r.lhs != g.start) return false;
      continue;
    }
    if (!g.is_terminal(r.rhs[0])) return false;
    for (std::size_t i = 1; i < r.rhs.size(); ++i) {
      if (!g.is_variable(r.rhs[i]) || r.rhs[i] == g.start) return false;
    }
  }
  return true;
}

Cfg to_gnf(const Cfg& g) {
  g.check();
  if (is_gnf(g)) return g;
  Builder b(g);
  b.new_start();
  b.remove_epsilon();
  b.remove_units();
  b.remove_useless();
  b.isolate_terminals();
  b.greibach();
  b.remove_useless();
  Cfg out = b.result();
  if (!is_gnf(out)) throw Error("internal error: normal form conversion did not reach GNF");
  return out;
}

TypeProgram gnf_to_program(const Cfg& g, OverloadMode mode) {
  g.check();
  if (!is_gnf(g)) throw PreconditionViolation("gnf_to_program needs a grammar in Greibach normal form");
  TypeProgram p;
  p.name = "gnf";
  TermStore& store = *p.store;
  p.type_order.push_back("eps");
  for (const auto& v : g.variables) {
    if (v == g.start) continue;
    store.declare(v, 1, {"T"});
    p.type_order.push_back(v);
  }
  SymbolId dollar = store.declare("$", 1, {"T"});
  p.type_order.push_back("$");
  Term x = store.var("x");

  auto stack_of = [&](const Rhs& rhs, Term bottom) {
    Term t = bottom;
    for (std::size_t i = rhs.size(); i-- > 1;) t = store.apply(store.symbol(rhs[i]), {t});
    return t;
  };
  bool need_dollar = false;
  for (const auto& r : g.rules) {
    FunctionDef d;
    if (r.rhs.empty()) {
      d.name = "$";
      d.params = {store.leaf()};
      d.body = Expr::term(store.leaf());
    } else if (r.lhs == g.start) {
      d.name = r.rhs[0];
      d.params = {store.leaf()};
      d.body = Expr::term(stack_of(r.rhs, store.apply(dollar, {store.leaf()})));
      need_dollar = true;
    } else {
      d.name = r.rhs[0];
      d.params = {store.apply(store.symbol(r.lhs), {x})};
      d.body = Expr::term(stack_of(r.rhs, x));
    }
    p.defs.push_back(std::move(d));
  }
  if (need_dollar) {
    FunctionDef d;
    d.name = "$";
    d.params = {store.apply(dollar, {store.leaf()})};
    d.body = Expr::term(store.leaf());
    p.defs.push_back(std::move(d));
  }
  p.alphabet = g.terminals;
  p.framing.suffix = {"$"};
  p.mode = mode;
  return p;
}

bool cyk_membership(const Cfg& g, const Word& w) {
  // Two-normal-form CYK with a unit/nullable closure per cell.
  std::unordered_map<std::string, std::size_t> id;
  auto sym = [&](const std::string& s) {
    auto [it, fresh] = id.emplace(s, id.size());
    return it->second;
  };
  for (const auto& t : g.terminals) sym(t);
  for (const auto& v : g.variables) sym(v);
  struct Bin {
    std::size_t lhs;
    std::vector<std::size_t> rhs;
  };
  std::vector<Bin> rules;
  std::size_t aux = 0;
  for (const auto& r : g.rules) {
    std::vector<std::size_t> rhs;
    for (const auto& s : r.rhs) rhs.push_back(sym(s));
    std::size_t lhs = sym(r.lhs);
    while (rhs.size() > 2) {
      std::size_t n = sym("\x01" + std::to_string(aux++));
      rules.push_back(Bin{lhs, {rhs[0], n}});
      rhs.erase(rhs.begin());
      lhs = n;
    }
    rules.push_back(Bin{lhs, rhs});
  }
  std::size_t n_sym = id.size();
  std::vector<bool> nullable(n_sym, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      if (nullable[r.lhs]) continue;
      if (std::all_of(r.rhs.begin(), r.rhs.end(), [&](std::size_t s) { return nullable[s]; })) {
        nullable[r.lhs] = true;
        changed = true;
      }
    }
  }
  auto start = id.find(g.start);
  if (start == id.end()) return false;
  if (w.empty()) return nullable[start->second];

  // unit[b] lists every A with A => B using one rule and nullable siblings.
  std::vector<std::vector<std::size_t>> unit(n_sym);
  for (const auto& r : rules) {
    if (r.rhs.size() == 1) unit[r.rhs[0]].push_back(r.lhs);
    if (r.rhs.size() == 2) {
      if (nullable[r.rhs[1]]) unit[r.rhs[0]].push_back(r.lhs);
      if (nullable[r.rhs[0]]) unit[r.rhs[1]].push_back(r.lhs);
    }
  }
  auto close = [&](std::vector<bool>& cell) {
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n_sym; ++s) {
      if (cell[s]) stack.push_back(s);
    }
    while (!stack.empty()) {
      std::size_t s = stack.back();
      stack.pop_back();
      for (std::size_t a : unit[s]) {
        if (!cell[a]) {
          cell[a] = true;
          stack.push_back(a);
        }
      }
    }
  };
  std::size_t n = w.size();
  std::vector<std::vector<std::vector<bool>>> table(n, std::vector<std::vector<bool>>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    auto& cell = table[i][i + 1];
    cell.assign(n_sym, false);
    if (!g.is_terminal(w[i])) return false;
    cell[id.at(w[i])] = true;
    close(cell);
  }
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      std::size_t j = i + len;
      auto& cell = table[i][j];
      cell.assign(n_sym, false);
      for (const auto& r : rules) {
        if (r.rhs.size() != 2 || cell[r.lhs]) continue;
        for (std::size_t k = i + 1; k < j; ++k) {
          if (table[i][k][r.rhs[0]] && table[k][j][r.rhs[1]]) {
            cell[r.lhs] = true;
            break;
          }
        }
      }
      close(cell);
    }
  }
  return table[0][n][start->second];
}

std::vector<Word> enumerate_words(const Cfg& g, std::size_t max_len) {
  std::vector<Word> out;
  for (const auto& w : all_words(g.terminals, max_len)) {
    if (cyk_membership(g, w)) out.push_back(w);
  }
  return out;
}

}  // namespace forge
