#include "forge/automata/automaton.hpp"

#include <algorithm>

#include "forge/error.hpp"

namespace forge {

bool dominates(const LatticePointA& u, const LatticePointA& l) {
  return u.states >= l.states && u.storage >= l.storage && u.recognizer >= l.recognizer &&
         u.epsilon >= l.epsilon && u.determinism >= l.determinism && u.multiplicity >= l.multiplicity &&
         u.depth >= l.depth;
}

std::string to_string(const LatticePointA& p) {
  static const char* states[] = {"stateless", "stateful"};
  static const char* storage[] = {"no-store", "pushdown", "tree", "linear-tape", "unbounded-tape"};
  static const char* rec[] = {"word", "forest"};
  static const char* eps[] = {"real-time", "epsilon"};
  static const char* det[] = {"deterministic", "non-deterministic"};
  static const char* mult[] = {"linear", "non-linear"};
  static const char* depth[] = {"shallow", "deep"};
  return std::string("<") + states[static_cast<int>(p.states)] + ", " + storage[static_cast<int>(p.storage)] +
         ", " + rec[static_cast<int>(p.recognizer)] + ", " + eps[static_cast<int>(p.epsilon)] + ", " +
         det[static_cast<int>(p.determinism)] + ", " + mult[static_cast<int>(p.multiplicity)] + ", " +
         depth[static_cast<int>(p.depth)] + ">";
}

std::optional<StateId> AutomatonSpec::find_state(std::string_view n) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == n) return static_cast<StateId>(i);
  }
  return std::nullopt;
}

StateId AutomatonSpec::add_state(std::string n, bool accept) {
  if (auto s = find_state(n)) {
    if (accept) accepting[index(*s)] = true;
    return *s;
  }
  states.push_back(std::move(n));
  accepting.push_back(accept);
  return static_cast<StateId>(states.size() - 1);
}

std::optional<std::uint32_t> AutomatonSpec::find_letter(std::string_view n) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i] == n) return static_cast<std::uint32_t>(i);
  }
  return std::nullopt;
}

std::uint32_t AutomatonSpec::add_letter(std::string n, unsigned rank) {
  if (auto l = find_letter(n)) return *l;
  alphabet.push_back(std::move(n));
  letter_ranks.push_back(rank);
  return static_cast<std::uint32_t>(alphabet.size() - 1);
}

std::optional<int> AutomatonSpec::find_tape_symbol(std::string_view n) const {
  for (std::size_t i = 0; i < tape_alphabet.size(); ++i) {
    if (tape_alphabet[i] == n) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<std::string> AutomatonSpec::word_alphabet() const {
  std::vector<std::string> out;
  for (const auto& a : alphabet) {
    if (!framing.frames(a)) out.push_back(a);
  }
  return out;
}

namespace {

bool tape_reads_overlap(const AutomatonSpec& spec, const TapeRule& a, const TapeRule& b) {
  if (a.read == b.read) return true;
  // An undefined cell is read by both a '_' rule and a rule on the blank.
  if (spec.blank) {
    auto undef_or_blank = [&](int r) { return r == -1 || r == *spec.blank; };
    return undef_or_blank(a.read) && undef_or_blank(b.read);
  }
  return false;
}

bool rewrites_overlap(const AutomatonSpec& spec, const StorageRewrite& a, const StorageRewrite& b) {
  const TermStore& store = *spec.store;
  if (a.index() != b.index()) return true;
  if (std::holds_alternative<RewriteRule>(a)) {
    const auto& ra = std::get<RewriteRule>(a);
    const auto& rb = std::get<RewriteRule>(b);
    if (ra.from_bottom || rb.from_bottom) return ra.from_bottom == rb.from_bottom;
    return patterns_overlap(store, ra.lhs, rb.lhs);
  }
  if (std::holds_alternative<MultiRewriteRule>(a)) {
    const auto& ma = std::get<MultiRewriteRule>(a);
    const auto& mb = std::get<MultiRewriteRule>(b);
    if (ma.lhs.size() != mb.lhs.size()) return false;
    for (std::size_t i = 0; i < ma.lhs.size(); ++i) {
      if (!patterns_overlap(store, ma.lhs[i], mb.lhs[i])) return false;
    }
    return true;
  }
  if (std::holds_alternative<TapeRule>(a)) {
    return tape_reads_overlap(spec, std::get<TapeRule>(a), std::get<TapeRule>(b));
  }
  return true;
}

struct RuleShape {
  bool linear = true;
  unsigned depth = 0;
};

RuleShape shape_of(const TermStore& store, const StorageRewrite& r) {
  RuleShape s;
  if (const auto* rr = std::get_if<RewriteRule>(&r)) {
    if (!rr->from_bottom) {
      s.linear = is_linear(store, rr->lhs);
      s.depth = store.depth(rr->lhs);
    }
  } else if (const auto* mr = std::get_if<MultiRewriteRule>(&r)) {
    std::vector<VarId> seen;
    for (Term t : mr->lhs) {
      auto info = analyze_term(store, t);
      s.depth = std::max(s.depth, info.depth);
      for (VarId v : info.vars) {
        if (std::find(seen.begin(), seen.end(), v) != seen.end()) s.linear = false;
        seen.push_back(v);
      }
      if (!info.linear) s.linear = false;
    }
  }
  return s;
}

void check_rewrite_kind(const AutomatonSpec& spec, const StorageRewrite& r, bool forest_item,
                        const std::string& where, std::vector<Diagnostic>& diags) {
  const TermStore& store = *spec.store;
  switch (spec.storage) {
    case StorageKind::None:
      if (!std::holds_alternative<std::monostate>(r) && !forest_item) {
        diags.push_back({"storage", where + ": rewrite given for a no-store automaton"});
      }
      return;
    case StorageKind::Tape: {
      const auto* t = std::get_if<TapeRule>(&r);
      if (t == nullptr) {
        diags.push_back({"storage", where + ": tape automata take only tape rules"});
        return;
      }
      auto n = static_cast<int>(spec.tape_alphabet.size());
      if (t->write < 0 || t->write >= n || t->read < -1 || t->read >= n) {
        diags.push_back({"storage", where + ": tape symbol out of range"});
      }
      return;
    }
    case StorageKind::Pushdown:
    case StorageKind::Tree:
      break;
  }
  if (std::holds_alternative<TapeRule>(r) || std::holds_alternative<std::monostate>(r)) {
    diags.push_back({"storage", where + ": tree automata take only tree rewrites"});
    return;
  }
  if (const auto* rr = std::get_if<RewriteRule>(&r)) {
    if (!is_valid(store, *rr)) diags.push_back({"rewrite", where + ": rhs uses variables absent from lhs"});
  }
  if (const auto* mr = std::get_if<MultiRewriteRule>(&r)) {
    if (!forest_item) diags.push_back({"recognizer", where + ": multi-input rule outside forest mode"});
    if (!is_valid(store, *mr)) diags.push_back({"rewrite", where + ": rhs uses variables absent from lhs"});
  }
}

template <typename E>
void compare_feature(E computed, E declared, const char* feature, std::vector<Diagnostic>& diags) {
  if (computed > declared) {
    diags.push_back({feature, std::string("declared feature '") + feature + "' is violated"});
  }
}

}  // namespace

ValidationReport validate(const AutomatonSpec& spec) {
  ValidationReport rep;
  auto& diags = rep.diagnostics;
  auto& p = rep.point;
  const TermStore& store = *spec.store;

  if (spec.states.empty()) diags.push_back({"states", "automaton has no states"});
  if (spec.accepting.size() != spec.states.size()) diags.push_back({"states", "accepting flags do not match states"});
  if (!spec.states.empty() && index(spec.initial) >= spec.states.size()) {
    diags.push_back({"states", "initial state out of range"});
  }
  if (spec.storage == StorageKind::Pushdown) {
    for (SymbolId s : store.symbols()) {
      if (store.rank(s) != 1) diags.push_back({"storage", "stack symbol '" + store.name(s) + "' is not of rank 1"});
    }
  }

  std::size_t accepting = static_cast<std::size_t>(std::count(spec.accepting.begin(), spec.accepting.end(), true));
  bool stateless = spec.states.size() == 1 && accepting == 1;
  p.states = stateless ? StatesFeature::Stateless : StatesFeature::Stateful;
  switch (spec.storage) {
    case StorageKind::None: p.storage = StorageFeature::NoStore; break;
    case StorageKind::Pushdown: p.storage = StorageFeature::Pushdown; break;
    case StorageKind::Tree: p.storage = StorageFeature::Tree; break;
    case StorageKind::Tape:
      p.storage = spec.tape_bound == TapeBound::Linear ? StorageFeature::LinearTape : StorageFeature::UnboundedTape;
      break;
  }
  p.recognizer = spec.forest ? RecognizerFeature::Forest : RecognizerFeature::Word;
  p.epsilon = spec.epsilon.empty() ? EpsilonFeature::RealTime : EpsilonFeature::Epsilon;

  auto state_ok = [&](StateId s) { return index(s) < spec.states.size(); };
  for (std::size_t i = 0; i < spec.delta.size(); ++i) {
    const auto& it = spec.delta[i];
    std::string where = "delta item " + std::to_string(i + 1);
    if (it.letter >= spec.alphabet.size()) diags.push_back({"alphabet", where + ": letter out of range"});
    if (!state_ok(it.to) || (!spec.forest && !state_ok(it.from))) diags.push_back({"states", where + ": state out of range"});
    if (spec.forest && it.letter < spec.letter_ranks.size() && it.children.size() != spec.letter_ranks[it.letter]) {
      diags.push_back({"recognizer", where + ": child state count differs from the letter's rank"});
    }
    check_rewrite_kind(spec, it.rewrite, spec.forest, where, diags);
  }
  for (std::size_t i = 0; i < spec.epsilon.size(); ++i) {
    const auto& it = spec.epsilon[i];
    std::string where = "epsilon item " + std::to_string(i + 1);
    if (!state_ok(it.from) || !state_ok(it.to)) diags.push_back({"states", where + ": state out of range"});
    if (std::holds_alternative<MultiRewriteRule>(it.rewrite)) {
      diags.push_back({"rewrite", where + ": epsilon items take single-input rules"});
    }
    check_rewrite_kind(spec, it.rewrite, false, where, diags);
  }

  bool linear = true;
  unsigned depth = 0;
  auto note_shape = [&](const StorageRewrite& r) {
    auto s = shape_of(store, r);
    linear = linear && s.linear;
    depth = std::max(depth, s.depth);
  };
  for (const auto& it : spec.delta) note_shape(it.rewrite);
  for (const auto& it : spec.epsilon) note_shape(it.rewrite);
  p.multiplicity = linear ? MultiplicityFeature::Linear : MultiplicityFeature::NonLinear;
  p.depth = depth > 1 ? DepthFeature::Deep : DepthFeature::Shallow;

  bool det = true;
  for (std::size_t i = 0; i < spec.delta.size() && det; ++i) {
    const auto& a = spec.delta[i];
    for (std::size_t j = i + 1; j < spec.delta.size() && det; ++j) {
      const auto& b = spec.delta[j];
      if (a.letter != b.letter) continue;
      if (spec.forest ? a.children != b.children : a.from != b.from) continue;
      if (rewrites_overlap(spec, a.rewrite, b.rewrite)) det = false;
    }
  }
  for (std::size_t i = 0; i < spec.epsilon.size() && det; ++i) {
    const auto& a = spec.epsilon[i];
    for (std::size_t j = i + 1; j < spec.epsilon.size() && det; ++j) {
      const auto& b = spec.epsilon[j];
      if (a.from == b.from && rewrites_overlap(spec, a.rewrite, b.rewrite)) det = false;
    }
    if (!spec.forest) {
      for (const auto& c : spec.delta) {
        if (c.from == a.from && rewrites_overlap(spec, a.rewrite, c.rewrite)) det = false;
      }
    }
  }
  p.determinism = det ? DeterminismFeature::Deterministic : DeterminismFeature::NonDeterministic;

  if (spec.declared) {
    const auto& d = *spec.declared;
    compare_feature(p.states, d.states, "states", diags);
    compare_feature(p.storage, d.storage, "storage", diags);
    compare_feature(p.recognizer, d.recognizer, "recognizer", diags);
    compare_feature(p.epsilon, d.epsilon, "real-time", diags);
    compare_feature(p.determinism, d.determinism, "deterministic", diags);
    compare_feature(p.multiplicity, d.multiplicity, "linear", diags);
    compare_feature(p.depth, d.depth, "shallow", diags);
  }
  return rep;
}

}  // namespace forge
