#include "forge/transforms/transforms.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "forge/error.hpp"
#include "forge/term/syntax.hpp"
#include "forge/types/check.hpp"

namespace forge {

Term unary_type(TermStore& store, std::size_t k) {
  SymbolId zero = store.declare("Zero", 0);
  SymbolId succ = store.declare("Succ", 1);
  Term t = store.constant(zero);
  for (std::size_t i = 0; i < k; ++i) t = store.apply(succ, {t});
  return t;
}

namespace {

std::string unique_name(const TermStore& store, std::string base) {
  while (store.find(base)) base += "_";
  return base;
}

std::string point_of(const AutomatonSpec& a) { return to_string(validate(a).point); }

// ---------------------------------------------------------------- tm -> ta

struct TmEncoding {
  AutomatonSpec ta;
  SymbolId joiner{};
  std::vector<SymbolId> cells;  // per tape symbol
};

TmEncoding encode_tm(const AutomatonSpec& tm) {
  if (tm.storage != StorageKind::Tape) throw ConversionError("tm_to_ta needs a tape automaton");
  if (!tm.blank) throw ConversionError("tm_to_ta needs a declared blank symbol");
  if (!tm.delta.empty()) throw ConversionError("tm_to_ta needs a machine whose input is preloaded on the tape");
  TmEncoding enc;
  AutomatonSpec& ta = enc.ta;
  ta.name = tm.name.empty() ? "tm-ta" : tm.name + "-ta";
  ta.storage = StorageKind::Tree;
  ta.states = tm.states;
  ta.accepting = tm.accepting;
  ta.initial = tm.initial;
  TermStore& store = *ta.store;

  int blank = *tm.blank;
  std::vector<int> order{blank};
  for (int i = 0; i < static_cast<int>(tm.tape_alphabet.size()); ++i) {
    if (i != blank) order.push_back(i);
  }
  enc.cells.resize(tm.tape_alphabet.size());
  for (int i : order) {
    enc.cells[static_cast<std::size_t>(i)] = store.declare(tm.tape_alphabet[static_cast<std::size_t>(i)], 1, {"x"});
    ta.storage_order.push_back(tm.tape_alphabet[static_cast<std::size_t>(i)]);
    if (i == blank) ta.storage_order.push_back("eps");
  }
  std::string joiner = unique_name(store, "O");
  enc.joiner = store.declare(joiner, 3, {"xL", "x", "xR"});
  ta.storage_order.push_back(joiner);

  Term xl = store.var("xL");
  Term xr = store.var("xR");
  Term eps = store.leaf();
  auto cell = [&](int sym, Term below) { return store.apply(enc.cells[static_cast<std::size_t>(sym)], {below}); };
  auto join = [&](Term l, Term c, Term r) { return store.apply(enc.joiner, {l, c, r}); };

  for (const auto& item : tm.epsilon) {
    const auto* rule = std::get_if<TapeRule>(&item.rewrite);
    if (rule == nullptr) throw ConversionError("tape machine item without a tape rule");
    if (rule->move == TapeRule::Move::Extend || rule->read < 0) {
      throw ConversionError("tm_to_ta needs machines that read blanks instead of extending undefined cells");
    }
    Term center = cell(rule->read, eps);
    // Neighbor cases: the blank, then the unit (all-blank remainder), then the rest.
    std::vector<std::optional<int>> neighbours;
    for (int i : order) {
      neighbours.emplace_back(i);
      if (i == blank) neighbours.emplace_back(std::nullopt);
    }
    for (const auto& n : neighbours) {
      RewriteRule r;
      if (rule->move == TapeRule::Move::Right) {
        r.lhs = join(xl, center, n ? cell(*n, xr) : eps);
        r.rhs = join(cell(rule->write, xl), n ? cell(*n, eps) : cell(blank, eps), n ? xr : eps);
      } else {
        r.lhs = join(n ? cell(*n, xl) : eps, center, xr);
        r.rhs = join(n ? xl : eps, n ? cell(*n, eps) : cell(blank, eps), cell(rule->write, xr));
      }
      ta.epsilon.push_back(EpsilonItem{item.from, r, item.to});
    }
  }
  return enc;
}

Term tm_input_tree(const TmEncoding& enc, const AutomatonSpec& tm, const Word& input) {
  TermStore& store = *enc.ta.store;
  auto sym = [&](const std::string& letter) {
    auto s = tm.find_tape_symbol(letter);
    if (!s) throw ConversionError("input letter '" + letter + "' is not a tape symbol");
    return enc.cells[static_cast<std::size_t>(*s)];
  };
  if (input.empty()) {
    return store.apply(enc.joiner, {store.leaf(), store.apply(enc.cells[static_cast<std::size_t>(*tm.blank)], {store.leaf()}), store.leaf()});
  }
  Term right = store.leaf();
  for (std::size_t i = input.size(); i-- > 1;) right = store.apply(sym(input[i]), {right});
  return store.apply(enc.joiner, {store.leaf(), store.apply(sym(input[0]), {store.leaf()}), right});
}

}  // namespace

Converted<AutomatonSpec> tm_to_ta(const AutomatonSpec& tm, const Word& input) {
  TmEncoding enc = encode_tm(tm);
  enc.ta.initial_tree = tm_input_tree(enc, tm, input);
  ConversionReport rep{"tm_to_ta", point_of(tm), point_of(enc.ta), enc.ta.states.size(), enc.ta.epsilon.size(), 0, 0};
  return {std::move(enc.ta), rep};
}

Term tape_to_tree(const AutomatonSpec& ta, const std::vector<std::string>& left_reversed, const std::string& center,
                  const std::vector<std::string>& right) {
  TermStore& store = *ta.store;
  SymbolId joiner{};
  bool found = false;
  for (SymbolId s : store.symbols()) {
    if (store.rank(s) == 3) {
      joiner = s;
      found = true;
      break;
    }
  }
  if (!found) throw PreconditionViolation("tree automaton has no rank-3 joiner");
  auto chain = [&](const std::vector<std::string>& cells) {
    Term t = store.leaf();
    for (std::size_t i = cells.size(); i-- > 0;) t = store.apply(store.symbol(cells[i]), {t});
    return t;
  };
  return store.apply(joiner, {chain(left_reversed), store.apply(store.symbol(center), {store.leaf()}), chain(right)});
}

Converted<TypeProgram> ta_to_typeof_program(const AutomatonSpec& ta, std::span<const Term> inputs) {
  if (ta.storage != StorageKind::Tree) throw ConversionError("ta_to_typeof_program needs a tree automaton");
  if (!ta.delta.empty()) throw ConversionError("ta_to_typeof_program needs an automaton with epsilon items only");
  TypeProgram p;
  p.name = ta.name.empty() ? "ta-typeof" : ta.name + "-typeof";
  p.store = ta.store;
  TermStore& store = *p.store;
  p.type_order = ta.storage_order;
  if (p.type_order.empty()) {
    p.type_order.push_back("eps");
    for (SymbolId s : store.symbols()) p.type_order.push_back(store.name(s));
  }
  p.unit_name = "E";
  p.mode = OverloadMode::OneType;
  p.typeof_style = TypeofStyle::Decltype;

  std::optional<SymbolId> joiner;
  std::vector<SymbolId> cells;
  for (const auto& n : p.type_order) {
    if (n == "eps") continue;
    SymbolId s = store.symbol(n);
    if (store.rank(s) == 3 && !joiner) joiner = s;
    if (store.rank(s) == 1) cells.push_back(s);
  }
  if (!joiner) throw ConversionError("ta_to_typeof_program needs a rank-3 joiner symbol");

  Term xl = store.var("xL");
  Term xr = store.var("xR");
  for (std::size_t q = 0; q < ta.states.size(); ++q) {
    if (!ta.accepting[q]) continue;
    for (SymbolId c : cells) {
      Term pattern = store.apply(*joiner, {xl, store.apply(c, {store.leaf()}), xr});
      bool defined = std::any_of(ta.epsilon.begin(), ta.epsilon.end(), [&](const EpsilonItem& it) {
        const auto* r = std::get_if<RewriteRule>(&it.rewrite);
        return index(it.from) == q && r != nullptr && patterns_overlap(store, r->lhs, pattern);
      });
      if (defined) continue;
      FunctionDef d;
      d.name = ta.states[q];
      d.auxiliary = true;
      d.params = {pattern};
      d.body = Expr::term(store.leaf());
      p.defs.push_back(std::move(d));
    }
  }
  for (const auto& it : ta.epsilon) {
    const auto* r = std::get_if<RewriteRule>(&it.rewrite);
    if (r == nullptr || r->from_bottom) throw ConversionError("epsilon item without a tree rewrite");
    if (!is_valid(store, *r)) throw ConversionError("rewrite mentions variables absent from its left-hand side");
    FunctionDef d;
    d.name = ta.states[index(it.from)];
    d.auxiliary = true;
    d.params = {r->lhs};
    d.uses_typeof = true;
    d.body = Expr::call(ta.states[index(it.to)], {Expr::term(r->rhs)});
    p.defs.push_back(std::move(d));
  }
  std::vector<Term> starts(inputs.begin(), inputs.end());
  if (starts.empty()) starts.push_back(ta.initial_tree);
  for (Term t : starts) p.expressions.push_back(Expr::call(ta.states[index(ta.initial)], {Expr::term(t)}));

  ConversionReport rep{"ta_to_typeof_program", point_of(ta), to_string(classify_program(p)), 0, 0, p.defs.size(), 0};
  return {std::move(p), rep};
}

Converted<TypeProgram> tm_to_typeof_program(const AutomatonSpec& tm, std::span<const Word> words) {
  TmEncoding enc = encode_tm(tm);
  std::vector<Term> trees;
  for (const auto& w : words) trees.push_back(tm_input_tree(enc, tm, w));
  enc.ta.initial_tree = trees.empty() ? tm_input_tree(enc, tm, {}) : trees.front();
  auto out = ta_to_typeof_program(enc.ta, trees);
  out.result.name = tm.name.empty() ? "tm-typeof" : tm.name + "-typeof";
  out.report.conversion = "tm_to_ta+ta_to_typeof_program";
  out.report.source_point = point_of(tm);
  return out;
}

// ------------------------------------------------ programs -> automata

namespace {

struct ForwardingPlan {
  std::vector<std::string> letters;
  std::map<std::string, StateId> aux_state;
};

void require_rudimentary(const TypeProgram& p, const char* op) {
  if (p.result_type) throw UnsupportedFeature(std::string(op) + ": required result type");
  for (const auto& d : p.defs) {
    if (d.params.size() != 1) throw UnsupportedFeature(std::string(op) + ": n-ary function '" + d.name + "'");
    if (!d.uses_typeof || !d.body.is_call()) continue;
    if (d.body.args.size() != 1 || d.body.args[0].is_call()) {
      throw UnsupportedFeature(std::string(op) + ": full typeof in '" + d.name + "'");
    }
    if (!p.has_function(d.body.callee, true)) {
      throw UnsupportedFeature(std::string(op) + ": typeof in '" + d.name + "' forwards to a primary function");
    }
  }
}

std::vector<std::string> automaton_letters(const TypeProgram& p) {
  std::vector<std::string> out = p.word_alphabet();
  auto add = [&](const std::string& l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  for (const auto& l : p.framing.prefix) add(l);
  for (const auto& l : p.framing.suffix) add(l);
  return out;
}

// Shared skeleton of the two program conversions; `encode` maps a definition
// to the storage rewrite of its item.
template <typename Encode>
void build_forwarding_automaton(const TypeProgram& p, AutomatonSpec& a, Encode encode) {
  a.initial = a.add_state("q0", true);
  std::map<std::string, StateId> aux;
  for (const auto& d : p.defs) {
    if (d.auxiliary && aux.count(d.name) == 0) aux[d.name] = a.add_state("q_" + d.name);
  }
  for (const auto& l : automaton_letters(p)) a.add_letter(l);
  a.framing = p.framing;
  for (const auto& d : p.defs) {
    Term rhs = d.body.is_call() ? d.body.args[0].leaf : d.body.leaf;
    StateId to = d.body.is_call() ? aux.at(d.body.callee) : a.initial;
    StorageRewrite rw = encode(d.params[0], rhs);
    if (d.auxiliary) {
      a.epsilon.push_back(EpsilonItem{aux.at(d.name), rw, to});
    } else if (auto letter = a.find_letter(d.name)) {
      a.delta.push_back(ConsumingItem{*letter, a.initial, {}, rw, to});
    }
  }
}

}  // namespace

Converted<AutomatonSpec> rudimentary_to_ta(const TypeProgram& p) {
  check_well_formed(p);
  require_rudimentary(p, "rudimentary_to_ta");
  AutomatonSpec a;
  a.name = p.name.empty() ? "program-ta" : p.name + "-ta";
  a.store = p.store;
  a.storage = StorageKind::Tree;
  a.initial_tree = p.store->leaf();
  a.storage_order = p.type_order;
  build_forwarding_automaton(p, a, [](Term lhs, Term rhs) { return StorageRewrite{RewriteRule{lhs, rhs}}; });
  ConversionReport rep{"rudimentary_to_ta", to_string(classify_program(p)), point_of(a), a.states.size(),
                       a.delta.size() + a.epsilon.size(), 0, 0};
  return {std::move(a), rep};
}

namespace {

struct StackEncoder {
  const TermStore& src;
  TermStore& dst;
  SymbolId bottom;

  // Rebuilds a monadic type as a stack; a variable end stays a variable and
  // a ground end gets the bottom marker over `below`.
  Term encode(Term t, Term below) {
    if (src.is_var(t)) return dst.var(src.var_name(src.var_of(t)));
    if (src.is_leaf(t)) return dst.apply(bottom, {below});
    SymbolId s = dst.symbol(src.name(src.head(t)));
    if (src.rank(src.head(t)) == 0) return dst.apply(s, {dst.apply(bottom, {below})});
    return dst.apply(s, {encode(src.child(t, 0), below)});
  }
};

}  // namespace

Converted<AutomatonSpec> fluent_to_dpda(const TypeProgram& p) {
  auto point = classify_program(p);
  LatticePointT fluent = fluent_point();
  fluent.c3 = PatternMultiplicity::NonLinear;  // monadic patterns cannot repeat a variable anyway
  if (!dominates(fluent, point)) {
    throw UnsupportedFeature("fluent_to_dpda: program at " + to_string(point) + " is above the Fluent point");
  }
  require_rudimentary(p, "fluent_to_dpda");
  const TermStore& src = *p.store;
  AutomatonSpec a;
  a.name = p.name.empty() ? "fluent-dpda" : p.name + "-dpda";
  a.storage = StorageKind::Pushdown;
  TermStore& dst = *a.store;
  for (SymbolId s : src.symbols()) {
    dst.declare(src.name(s), 1);
    a.storage_order.push_back(src.name(s));
  }
  SymbolId bottom = dst.declare(unique_name(dst, p.unit_name.empty() ? "E" : p.unit_name), 1);
  a.storage_order.push_back(dst.name(bottom));
  StackEncoder enc{src, dst, bottom};
  a.initial_tree = dst.apply(bottom, {dst.leaf()});
  Term rest = dst.var("y_");
  build_forwarding_automaton(p, a, [&](Term lhs, Term rhs) {
    RewriteRule r;
    if (src.ground(lhs)) {
      r.lhs = enc.encode(lhs, rest);
      r.rhs = enc.encode(rhs, rest);
    } else {
      r.lhs = enc.encode(lhs, rest);
      // a ground result over a variable pattern pushes a fresh bottom marker
      Term below = enc.encode(lhs, rest);
      while (!dst.is_var(below)) below = dst.child(below, 0);
      r.rhs = enc.encode(rhs, below);
    }
    return StorageRewrite{r};
  });
  ConversionReport rep{"fluent_to_dpda", to_string(point), point_of(a), a.states.size(),
                       a.delta.size() + a.epsilon.size(), 0, dst.symbol_count()};
  return {std::move(a), rep};
}

Term decode_fluent_stack(const AutomatonSpec& dpda, const TypeProgram& source, Term stack) {
  const TermStore& st = *dpda.store;
  TermStore& ps = *source.store;
  std::vector<std::string> names;
  Term cur = stack;
  while (st.is_apply(cur)) {
    const std::string& n = st.name(st.head(cur));
    if (!ps.find(n)) break;  // the bottom marker
    names.push_back(n);
    cur = st.child(cur, 0);
  }
  Term t = ps.leaf();
  for (std::size_t i = names.size(); i-- > 0;) {
    SymbolId s = ps.symbol(names[i]);
    t = ps.rank(s) == 0 ? ps.constant(s) : ps.apply(s, {t});
  }
  return t;
}

// ------------------------------------------------------------ ta -> dpda

Term TaDpda::decode(Term stack) const {
  const TermStore& st = *dpda.store;
  std::vector<std::size_t> syms;
  for (Term cur = stack; st.is_apply(cur); cur = st.child(cur, 0)) {
    const std::string& n = st.name(st.head(cur));
    syms.push_back(static_cast<std::size_t>(std::stoul(n.substr(1))));
  }
  Term t = source_store->leaf();
  for (std::size_t i = syms.size(); i-- > 0;) {
    const RewriteRule& r = rules.at(syms[i]);
    if (r.from_bottom) {
      t = r.rhs;
      continue;
    }
    auto next = apply_rewrite(*source_store, r, t);
    if (!next) throw Error("stack does not decode: rule r" + std::to_string(syms[i]) + " does not apply");
    t = *next;
  }
  return t;
}

namespace {

class TaDpdaBuilder {
 public:
  TaDpdaBuilder(const AutomatonSpec& ta, TaDpda& out) : ta_(ta), out_(out), src_(*ta.store) {}

  void build() {
    check_restrictions();
    AutomatonSpec& d = out_.dpda;
    d.name = ta_.name.empty() ? "ta-dpda" : ta_.name + "-dpda";
    d.storage = StorageKind::Pushdown;
    d.alphabet = ta_.alphabet;
    d.letter_ranks = ta_.letter_ranks;
    d.framing = ta_.framing;
    for (std::size_t q = 0; q < ta_.states.size(); ++q) d.add_state(ta_.states[q], ta_.accepting[q]);
    d.initial = ta_.initial;
    out_.main_states = ta_.states.size();
    out_.source_store = ta_.store;
    y_ = d.store->var("y");

    RewriteRule r0{src_.leaf(), ta_.initial_tree, true};
    std::size_t s0 = symbol_for(r0);
    d.initial_tree = d.store->apply(sym(s0), {d.store->leaf()});

    bool changed = true;
    while (changed) {
      changed = false;
      for (; consumed_ < out_.rules.size(); ++consumed_) {
        for (const auto& item : ta_.delta) consume(consumed_, item);
        changed = true;
      }
      std::vector<std::pair<std::pair<StateId, std::size_t>, StateId>> snapshot(extract_states_.begin(),
                                                                                 extract_states_.end());
      for (const auto& [key, state] : snapshot) {
        for (std::size_t s = 0; s < out_.rules.size(); ++s) {
          if (processed_.insert({s, key}).second) {
            extract_epsilon(s, key.first, key.second, state);
            changed = true;
          }
        }
      }
    }
  }

 private:
  void check_restrictions() {
    if (ta_.storage != StorageKind::Tree && ta_.storage != StorageKind::Pushdown) {
      throw ConversionError("ta_to_dpda needs a tree automaton");
    }
    if (ta_.forest) throw ConversionError("ta_to_dpda needs word input");
    if (!ta_.epsilon.empty()) throw ConversionError("ta_to_dpda needs a real-time automaton");
    auto v = validate(ta_);
    if (!v.ok()) throw ConversionError("ta_to_dpda: source automaton is malformed: " + v.diagnostics[0].message);
    if (v.point.determinism != DeterminismFeature::Deterministic) {
      throw ConversionError("ta_to_dpda needs a deterministic automaton");
    }
    for (const auto& it : ta_.delta) {
      const auto* r = std::get_if<RewriteRule>(&it.rewrite);
      if (r == nullptr) throw ConversionError("ta_to_dpda: item without a tree rewrite");
      Term l = r->lhs;
      if (src_.is_var(l) || src_.is_leaf(l)) continue;
      std::vector<VarId> seen;
      for (Term c : src_.children(l)) {
        if (!src_.is_var(c) || std::find(seen.begin(), seen.end(), src_.var_of(c)) != seen.end()) {
          throw ConversionError("ta_to_dpda: left-hand side " + to_string(src_, l) +
                                " has more than one storage node");
        }
        seen.push_back(src_.var_of(c));
      }
    }
    consumed_ = 0;
  }

  SymbolId sym(std::size_t i) { return out_.dpda.store->declare("r" + std::to_string(i), 1); }

  std::size_t symbol_for(const RewriteRule& raw) {
    TermStore& store = *ta_.store;
    RewriteRule r = raw.from_bottom ? raw : canonicalize(store, raw);
    for (std::size_t i = 0; i < out_.rules.size(); ++i) {
      if (out_.rules[i] == r) return i;
    }
    out_.rules.push_back(r);
    sym(out_.rules.size() - 1);
    return out_.rules.size() - 1;
  }

  bool follows_top(const RewriteRule& top, Term lhs) const {
    if (src_.is_var(lhs)) return true;
    if (src_.is_leaf(lhs)) return src_.is_leaf(top.rhs);
    return src_.is_apply(top.rhs) && src_.head(top.rhs) == src_.head(lhs);
  }

  RewriteRule stack_rule(std::size_t top, Term rhs) {
    TermStore& d = *out_.dpda.store;
    return RewriteRule{d.apply(sym(top), {y_}), rhs};
  }

  struct Target {
    Term stack_rhs;
    StateId state;
  };

  // Extracting child k of the tree whose topmost rule is `top`, ending in `goal`.
  Target extract(std::size_t top, std::size_t k, StateId goal) {
    TermStore& d = *out_.dpda.store;
    RewriteRule r = out_.rules[top];
    Term child = ta_.store->child(r.rhs, k);
    if (!src_.is_var(child)) {
      std::size_t repl = symbol_for(RewriteRule{r.lhs, child, r.from_bottom});
      return {d.apply(sym(repl), {y_}), goal};
    }
    if (src_.is_var(r.lhs)) return {y_, goal};
    auto kids = src_.children(r.lhs);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (kids[i] == child) return {y_, extract_state(goal, i)};
    }
    throw ConversionError("internal error: extracted variable not bound by the rule");
  }

  StateId extract_state(StateId goal, std::size_t i) {
    auto key = std::make_pair(goal, i);
    auto it = extract_states_.find(key);
    if (it != extract_states_.end()) return it->second;
    StateId s = out_.dpda.add_state(ta_.states[index(goal)] + "__" + std::to_string(i + 1));
    extract_states_.emplace(key, s);
    return s;
  }

  void consume(std::size_t top, const ConsumingItem& item) {
    const auto& rho = std::get<RewriteRule>(item.rewrite);
    const RewriteRule& r = out_.rules[top];
    if (!follows_top(r, rho.lhs)) return;
    TermStore& d = *out_.dpda.store;
    Target t{};
    if (!src_.is_var(rho.rhs)) {
      std::size_t pushed = symbol_for(rho);
      t = {d.apply(sym(pushed), {d.apply(sym(top), {y_})}), item.to};
    } else if (src_.is_var(rho.lhs)) {
      t = {d.apply(sym(top), {y_}), item.to};
    } else {
      auto kids = src_.children(rho.lhs);
      std::size_t k = static_cast<std::size_t>(std::find(kids.begin(), kids.end(), rho.rhs) - kids.begin());
      t = extract(top, k, item.to);
    }
    out_.dpda.delta.push_back(ConsumingItem{item.letter, item.from, {}, stack_rule(top, t.stack_rhs), t.state});
  }

  void extract_epsilon(std::size_t top, StateId goal, std::size_t i, StateId from) {
    const RewriteRule& r = out_.rules[top];
    if (!src_.is_apply(r.rhs) || src_.children(r.rhs).size() <= i) return;
    Target t = extract(top, i, goal);
    out_.dpda.epsilon.push_back(EpsilonItem{from, stack_rule(top, t.stack_rhs), t.state});
  }

  const AutomatonSpec& ta_;
  TaDpda& out_;
  const TermStore& src_;
  Term y_{};
  std::size_t consumed_ = 0;
  std::map<std::pair<StateId, std::size_t>, StateId> extract_states_;
  std::set<std::pair<std::size_t, std::pair<StateId, std::size_t>>> processed_;
};

}  // namespace

TaDpda ta_to_dpda(const AutomatonSpec& ta) {
  TaDpda out;
  TaDpdaBuilder(ta, out).build();
  auto v = validate(out.dpda);
  if (!v.ok()) throw ConversionError("ta_to_dpda produced a malformed automaton: " + v.diagnostics[0].message);
  if (v.point.determinism != DeterminismFeature::Deterministic) {
    throw ConversionError("ta_to_dpda output failed the determinism check");
  }
  out.report = ConversionReport{"ta_to_dpda", point_of(ta), to_string(v.point), out.dpda.states.size(),
                                out.dpda.delta.size() + out.dpda.epsilon.size(), 0, out.rules.size()};
  return out;
}

// ------------------------------------------------------ polyadic -> dyadic

Converted<AutomatonSpec> polyadic_to_dyadic(const AutomatonSpec& ta) {
  if (ta.storage == StorageKind::Tape) throw ConversionError("polyadic_to_dyadic needs tree storage");
  const TermStore& src = *ta.store;
  if (src.max_rank() <= 2) {
    ConversionReport rep{"polyadic_to_dyadic", point_of(ta), point_of(ta), ta.states.size(),
                         ta.delta.size() + ta.epsilon.size(), 0, 0};
    return {ta, rep};
  }
  AutomatonSpec out = ta;
  out.store = std::make_shared<TermStore>();
  TermStore& dst = *out.store;
  std::map<SymbolId, std::vector<SymbolId>> pieces;
  out.storage_order.clear();
  auto order = ta.storage_order;
  if (order.empty()) {
    for (SymbolId s : src.symbols()) order.push_back(src.name(s));
  }
  // Reserve every original name first so the pieces cannot collide with one.
  std::vector<std::string> taken;
  for (SymbolId s : src.symbols()) taken.push_back(src.name(s));
  auto fresh = [&](const std::string& base) {
    std::string n = base;
    while (std::find(taken.begin(), taken.end(), n) != taken.end()) n += "_";
    taken.push_back(n);
    return n;
  };
  for (const auto& n : order) {
    if (n == "eps") {
      out.storage_order.push_back(n);
      continue;
    }
    SymbolId s = src.symbol(n);
    unsigned r = src.rank(s);
    if (r <= 2) {
      dst.declare(n, r, src.params(s));
      out.storage_order.push_back(n);
      continue;
    }
    for (unsigned i = 1; i <= r; ++i) {
      std::string piece = fresh(n + "_" + std::to_string(i));
      pieces[s].push_back(dst.declare(piece, i < r ? 2 : 1));
      out.storage_order.push_back(piece);
    }
  }
  for (SymbolId s : src.symbols()) {
    if (src.rank(s) <= 2 && !dst.find(src.name(s))) dst.declare(src.name(s), src.rank(s), src.params(s));
    if (src.rank(s) > 2 && pieces.count(s) == 0) {
      for (unsigned i = 1; i <= src.rank(s); ++i) {
        pieces[s].push_back(dst.declare(fresh(src.name(s) + "_" + std::to_string(i)), i < src.rank(s) ? 2 : 1));
      }
    }
  }
  auto convert = [&](auto& self, Term t) -> Term {
    switch (src.kind(t)) {
      case NodeKind::Leaf: return dst.leaf();
      case NodeKind::Var: return dst.var(src.var_name(src.var_of(t)));
      case NodeKind::Apply: break;
    }
    SymbolId s = src.head(t);
    std::vector<Term> kids;
    for (Term c : src.children(t)) kids.push_back(self(self, c));
    auto it = pieces.find(s);
    if (it == pieces.end()) return dst.apply(dst.symbol(src.name(s)), kids);
    const auto& ps = it->second;
    Term acc = dst.apply(ps.back(), {kids.back()});
    for (std::size_t i = ps.size() - 1; i-- > 0;) acc = dst.apply(ps[i], {kids[i], acc});
    return acc;
  };
  auto convert_rw = [&](StorageRewrite& rw) {
    if (auto* r = std::get_if<RewriteRule>(&rw)) {
      if (!r->from_bottom) r->lhs = convert(convert, r->lhs);
      r->rhs = convert(convert, r->rhs);
    } else if (auto* m = std::get_if<MultiRewriteRule>(&rw)) {
      for (Term& t : m->lhs) t = convert(convert, t);
      m->rhs = convert(convert, m->rhs);
    }
  };
  for (auto& it : out.delta) convert_rw(it.rewrite);
  for (auto& it : out.epsilon) convert_rw(it.rewrite);
  out.initial_tree = convert(convert, ta.initial_tree);
  out.name = ta.name.empty() ? "dyadic" : ta.name + "-dyadic";
  ConversionReport rep{"polyadic_to_dyadic", point_of(ta), point_of(out), out.states.size(),
                       out.delta.size() + out.epsilon.size(), 0, dst.symbol_count()};
  return {std::move(out), rep};
}

}  // namespace forge
