#include "forge/toolchain/random.hpp"

#include <algorithm>
#include <random>

#include "forge/term/term.hpp"

namespace forge {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  unsigned below(unsigned n) { return n == 0 ? 0 : std::uniform_int_distribution<unsigned>(0, n - 1)(gen_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(static_cast<unsigned>(v.size()))]; }

 private:
  std::mt19937_64 gen_;
};

const std::vector<std::string> kMonadicNames = {"A", "B", "C", "D", "G", "H"};

std::vector<std::string> letters_for(unsigned n) {
  static const std::vector<std::string> all = {"a", "b", "c", "d"};
  n = std::clamp(n, 1U, static_cast<unsigned>(all.size()));
  return {all.begin(), all.begin() + n};
}

Term chain(TermStore& store, Rng& rng, const std::vector<SymbolId>& syms, unsigned depth, Term base) {
  for (unsigned i = 0; i < depth; ++i) base = store.apply(rng.pick(syms), {base});
  return base;
}

// Ground or variable-free terms over a ranked signature.
Term random_term(TermStore& store, Rng& rng, const std::vector<SymbolId>& syms, unsigned depth,
                 const std::vector<Term>& leaves) {
  if (depth == 0 || rng.chance(0.3)) {
    std::vector<Term> options = leaves;
    for (SymbolId s : syms) {
      if (store.rank(s) == 0) options.push_back(store.constant(s));
    }
    return rng.pick(options);
  }
  std::vector<SymbolId> inner;
  for (SymbolId s : syms) {
    if (store.rank(s) > 0) inner.push_back(s);
  }
  if (inner.empty()) return rng.pick(leaves);
  SymbolId s = rng.pick(inner);
  std::vector<Term> kids;
  for (unsigned i = 0; i < store.rank(s); ++i) kids.push_back(random_term(store, rng, syms, depth - 1, leaves));
  return store.apply(s, kids);
}

// Patterns draw fresh variables; `nonlinear` allows reuse.
Term random_pattern(TermStore& store, Rng& rng, const std::vector<SymbolId>& syms, unsigned depth, bool nonlinear,
                    std::vector<Term>& used) {
  auto leaf = [&]() -> Term {
    unsigned r = rng.below(4);
    if (r == 0) return store.leaf();
    if (nonlinear && !used.empty() && r == 1) return rng.pick(used);
    Term v = store.var("x" + std::to_string(used.size() + 1));
    used.push_back(v);
    return v;
  };
  if (depth == 0 || rng.chance(0.3)) {
    if (rng.chance(0.2)) {
      for (SymbolId s : syms) {
        if (store.rank(s) == 0) return store.constant(s);
      }
    }
    return leaf();
  }
  std::vector<SymbolId> inner;
  for (SymbolId s : syms) {
    if (store.rank(s) > 0) inner.push_back(s);
  }
  SymbolId s = rng.pick(inner);
  std::vector<Term> kids;
  for (unsigned i = 0; i < store.rank(s); ++i) {
    kids.push_back(random_pattern(store, rng, syms, depth - 1, nonlinear, used));
  }
  return store.apply(s, kids);
}

bool overlaps_existing(const TypeProgram& p, const std::string& name, Term pattern) {
  for (const auto& d : p.defs) {
    if (d.name == name && patterns_overlap(*p.store, d.params[0], pattern)) return true;
  }
  return false;
}

// Fills defs for `letters` plus up to two auxiliaries h1, h2 (hi forwards only to hj, j > i).
void fill_defs(TypeProgram& p, Rng& rng, const RandomLimits& lim, const std::vector<std::string>& letters,
               const std::vector<SymbolId>& syms, bool monadic) {
  TermStore& store = *p.store;
  unsigned aux_count = rng.below(3);
  std::vector<std::string> names = letters;
  for (unsigned i = 1; i <= aux_count; ++i) names.push_back("h" + std::to_string(i));
  unsigned budget = 3 + rng.below(std::max(1U, lim.max_functions - 2));
  budget = std::min(budget, lim.max_functions);
  for (unsigned attempt = 0; attempt < 60 && p.defs.size() < budget; ++attempt) {
    // bias early definitions towards letters so that words get somewhere
    std::size_t fi = p.defs.size() < letters.size() ? p.defs.size() : rng.below(static_cast<unsigned>(names.size()));
    const std::string& name = names[fi];
    bool aux = fi >= letters.size();
    std::vector<Term> vars;
    Term pattern;
    Term rhs;
    if (monadic) {
      bool open = rng.chance(0.6);
      Term base = open ? store.var("x") : store.leaf();
      if (open) vars.push_back(base);
      pattern = chain(store, rng, syms, rng.below(lim.max_depth + 1), base);
      rhs = chain(store, rng, syms, rng.below(lim.max_depth + 1), base);
    } else {
      pattern = random_pattern(store, rng, syms, rng.below(lim.max_depth + 1), rng.chance(0.25), vars);
      std::vector<Term> leaves = vars;
      leaves.push_back(store.leaf());
      rhs = random_term(store, rng, syms, rng.below(lim.max_depth + 1), leaves);
    }
    if (overlaps_existing(p, name, pattern)) continue;
    FunctionDef d;
    d.name = name;
    d.auxiliary = aux;
    d.params = {pattern};
    std::size_t first_target = aux ? fi + 1 : letters.size();
    if (first_target < names.size() && rng.chance(0.35)) {
      std::size_t target = first_target + rng.below(static_cast<unsigned>(names.size() - first_target));
      d.uses_typeof = true;
      d.body = Expr::call(names[target], {Expr::term(rhs)});
    } else {
      d.body = Expr::term(rhs);
    }
    p.defs.push_back(std::move(d));
  }
  // an auxiliary that never got a definition cannot be forwarded to
  for (auto& d : p.defs) {
    if (d.uses_typeof && !p.has_function(d.body.callee, true)) {
      d.uses_typeof = false;
      d.body = d.body.args.front();
    }
  }
}

}  // namespace

TypeProgram random_fluent_program(std::uint64_t seed, const RandomLimits& lim) {
  Rng rng(seed);
  TypeProgram p;
  p.name = "fluent-" + std::to_string(seed);
  unsigned k = 1 + rng.below(std::clamp(lim.max_types, 1U, static_cast<unsigned>(kMonadicNames.size())));
  std::vector<SymbolId> syms;
  for (unsigned i = 0; i < k; ++i) {
    syms.push_back(p.store->declare(kMonadicNames[i], 1));
    p.type_order.push_back(kMonadicNames[i]);
  }
  p.type_order.push_back("eps");
  p.alphabet = letters_for(lim.letters);
  fill_defs(p, rng, lim, p.alphabet, syms, true);
  return p;
}

TypeProgram random_rudimentary_program(std::uint64_t seed, const RandomLimits& lim) {
  Rng rng(seed);
  TypeProgram p;
  p.name = "rudimentary-" + std::to_string(seed);
  struct Decl {
    const char* name;
    unsigned rank;
  };
  const std::vector<Decl> pool = {{"K", 0}, {"A", 1}, {"B", 1}, {"P", 2}, {"Q", 2}, {"R", 3}};
  std::vector<SymbolId> syms;
  for (const auto& d : pool) {
    if (syms.size() >= lim.max_types) break;
    // always keep one symbol of positive rank
    if (d.rank == 1 && d.name[0] == 'A') {
      syms.push_back(p.store->declare(d.name, d.rank));
    } else if (rng.chance(0.6)) {
      syms.push_back(p.store->declare(d.name, d.rank));
    } else {
      continue;
    }
    p.type_order.push_back(d.name);
  }
  p.type_order.push_back("eps");
  p.alphabet = letters_for(lim.letters);
  fill_defs(p, rng, lim, p.alphabet, syms, false);
  return p;
}

AutomatonSpec random_restricted_ta(std::uint64_t seed, const RandomLimits& lim) {
  Rng rng(seed);
  AutomatonSpec a;
  a.name = "ta-" + std::to_string(seed);
  a.storage = StorageKind::Tree;
  TermStore& store = *a.store;
  std::vector<SymbolId> syms = {store.declare("A", 1), store.declare("P", 2)};
  a.storage_order = {"A", "P"};
  if (rng.chance(0.5)) {
    syms.push_back(store.declare("K", 0));
    a.storage_order.push_back("K");
  }
  if (rng.chance(0.5)) {
    syms.push_back(store.declare("B", 1));
    a.storage_order.push_back("B");
  }
  a.storage_order.push_back("eps");
  unsigned nstates = 1 + rng.below(3);
  for (unsigned i = 0; i < nstates; ++i) a.add_state("q" + std::to_string(i), rng.chance(0.5));
  a.accepting[0] = a.accepting[0] || rng.chance(0.5);
  a.initial = StateId{0};
  for (const auto& l : letters_for(lim.letters)) a.add_letter(l);
  a.initial_tree = random_term(store, rng, syms, 2, {store.leaf()});

  std::vector<Term> roots = {store.leaf()};
  for (SymbolId s : syms) {
    std::vector<Term> kids;
    for (unsigned i = 0; i < store.rank(s); ++i) kids.push_back(store.var("x" + std::to_string(i + 1)));
    roots.push_back(store.apply(s, kids));
  }
  auto add = [&](std::uint32_t letter, unsigned from, Term lhs) {
    std::vector<Term> leaves;
    for (VarId v : variables_of(store, lhs)) leaves.push_back(store.var(v));
    leaves.push_back(store.leaf());
    Term rhs = random_term(store, rng, syms, rng.below(lim.max_depth + 1), leaves);
    ConsumingItem it;
    it.letter = letter;
    it.from = StateId{from};
    it.rewrite = RewriteRule{lhs, rhs};
    it.to = StateId{rng.below(nstates)};
    a.delta.push_back(std::move(it));
  };
  for (std::uint32_t l = 0; l < a.alphabet.size(); ++l) {
    for (unsigned q = 0; q < nstates; ++q) {
      if (!rng.chance(0.8)) continue;
      if (rng.chance(0.25)) {
        add(l, q, store.var("x"));
        continue;
      }
      for (Term r : roots) {
        if (rng.chance(0.5)) add(l, q, r);
      }
    }
  }
  return a;
}

Cfg random_cfg(std::uint64_t seed, unsigned max_vars) {
  Rng rng(seed);
  Cfg g;
  g.terminals = {"a", "b"};
  const std::vector<std::string> names = {"S", "X", "Y", "Z", "U", "V"};
  unsigned n = 1 + rng.below(std::clamp(max_vars, 1U, static_cast<unsigned>(names.size())));
  g.variables.assign(names.begin(), names.begin() + n);
  g.start = "S";
  std::vector<std::string> symbols = g.terminals;
  symbols.insert(symbols.end(), g.variables.begin(), g.variables.end());
  for (const auto& v : g.variables) {
    unsigned alts = 1 + rng.below(3);
    for (unsigned i = 0; i < alts; ++i) {
      Production pr{v, {}};
      unsigned len = rng.below(4);
      for (unsigned k = 0; k < len; ++k) {
        // terminals twice as likely, which keeps most languages non-empty
        pr.rhs.push_back(rng.chance(0.5) ? rng.pick(g.terminals) : rng.pick(symbols));
      }
      if (std::find(g.rules.begin(), g.rules.end(), pr) == g.rules.end()) g.rules.push_back(std::move(pr));
    }
  }
  return g;
}

}  // namespace forge
