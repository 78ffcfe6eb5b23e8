#include "forge/term/term.hpp"

#include <algorithm>
#include <unordered_map>

#include "forge/error.hpp"

namespace forge {

namespace {

void collect_vars(const TermStore& store, Term t, std::vector<VarId>& out) {
  if (store.ground(t)) return;
  if (store.is_var(t)) {
    out.push_back(store.var_of(t));
    return;
  }
  for (Term c : store.children(t)) collect_vars(store, c, out);
}

}  // namespace

TermInfo analyze_term(const TermStore& store, Term t) {
  TermInfo info;
  info.depth = store.depth(t);
  info.grounded = store.ground(t);
  collect_vars(store, t, info.vars);
  auto sorted = info.vars;
  std::sort(sorted.begin(), sorted.end());
  info.linear = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  return info;
}

std::vector<VarId> variables_of(const TermStore& store, Term t) {
  std::vector<VarId> all;
  collect_vars(store, t, all);
  std::vector<VarId> out;
  for (VarId v : all) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

bool is_linear(const TermStore& store, Term t) { return analyze_term(store, t).linear; }

std::optional<Term> Substitution::find(VarId v) const {
  for (const auto& [k, t] : bindings_) {
    if (k == v) return t;
  }
  return std::nullopt;
}

void Substitution::bind(VarId v, Term t) {
  for (auto& [k, old] : bindings_) {
    if (k == v) {
      old = t;
      return;
    }
  }
  bindings_.emplace_back(v, t);
}

bool Substitution::grounded(const TermStore& store) const {
  return std::all_of(bindings_.begin(), bindings_.end(),
                     [&](const auto& b) { return store.ground(b.second); });
}

bool operator==(const Substitution& a, const Substitution& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.bindings_.begin(), a.bindings_.end(),
                     [&](const auto& kv) { return b.find(kv.first) == kv.second; });
}

bool match_into(const TermStore& store, Term pattern, Term subject, Substitution& s) {
  if (store.ground(pattern)) return pattern == subject;
  if (store.is_var(pattern)) {
    VarId v = store.var_of(pattern);
    if (auto bound = s.find(v)) return *bound == subject;
    s.bind(v, subject);
    return true;
  }
  if (!store.is_apply(subject) || store.head(subject) != store.head(pattern)) return false;
  auto pc = store.children(pattern);
  auto sc = store.children(subject);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    if (!match_into(store, pc[i], sc[i], s)) return false;
  }
  return true;
}

std::optional<Substitution> match(const TermStore& store, Term pattern, Term subject) {
  Substitution s;
  if (!match_into(store, pattern, subject, s)) return std::nullopt;
  return s;
}

Term apply_substitution(TermStore& store, Term t, const Substitution& s) {
  if (store.ground(t) || s.empty()) return t;
  if (store.is_var(t)) {
    auto b = s.find(store.var_of(t));
    return b ? *b : t;
  }
  auto src = store.children(t);
  std::vector<Term> kids(src.begin(), src.end());
  for (Term& k : kids) k = apply_substitution(store, k, s);
  return store.apply(store.head(t), kids);
}

bool is_valid(const TermStore& store, const RewriteRule& rule) {
  if (rule.from_bottom) return store.ground(rule.rhs);
  auto lv = variables_of(store, rule.lhs);
  for (VarId v : variables_of(store, rule.rhs)) {
    if (std::find(lv.begin(), lv.end(), v) == lv.end()) return false;
  }
  return true;
}

bool is_valid(const TermStore& store, const MultiRewriteRule& rule) {
  std::vector<VarId> lv;
  for (Term t : rule.lhs) {
    auto vs = variables_of(store, t);
    lv.insert(lv.end(), vs.begin(), vs.end());
  }
  for (VarId v : variables_of(store, rule.rhs)) {
    if (std::find(lv.begin(), lv.end(), v) == lv.end()) return false;
  }
  return true;
}

std::optional<Term> apply_rewrite(TermStore& store, const RewriteRule& rule, Term subject) {
  if (rule.from_bottom) return std::nullopt;
  auto s = match(store, rule.lhs, subject);
  if (!s) return std::nullopt;
  return apply_substitution(store, rule.rhs, *s);
}

std::optional<Term> apply_multi_rewrite(TermStore& store, const MultiRewriteRule& rule,
                                        std::span<const Term> subjects) {
  if (subjects.size() != rule.lhs.size()) {
    throw PreconditionViolation("multi-input rule expects " + std::to_string(rule.lhs.size()) +
                                " subjects, got " + std::to_string(subjects.size()));
  }
  Substitution s;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    if (!match_into(store, rule.lhs[i], subjects[i], s)) return std::nullopt;
  }
  return apply_substitution(store, rule.rhs, s);
}

namespace {

Substitution canonical_renaming(TermStore& store, std::span<const Term> lhs) {
  std::vector<VarId> order;
  for (Term t : lhs) {
    for (VarId v : variables_of(store, t)) {
      if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    }
  }
  Substitution s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    s.bind(order[i], store.var("x" + std::to_string(i + 1)));
  }
  return s;
}

}  // namespace

RewriteRule canonicalize(TermStore& store, const RewriteRule& rule) {
  if (rule.from_bottom) return rule;
  auto s = canonical_renaming(store, std::span<const Term>(&rule.lhs, 1));
  return RewriteRule{apply_substitution(store, rule.lhs, s), apply_substitution(store, rule.rhs, s)};
}

MultiRewriteRule canonicalize(TermStore& store, const MultiRewriteRule& rule) {
  auto s = canonical_renaming(store, rule.lhs);
  MultiRewriteRule out;
  for (Term t : rule.lhs) out.lhs.push_back(apply_substitution(store, t, s));
  out.rhs = apply_substitution(store, rule.rhs, s);
  return out;
}

bool follows(const TermStore& store, const RewriteRule& earlier, const RewriteRule& later) {
  auto check = [&](const RewriteRule& r, const char* which) {
    if (!r.from_bottom && store.is_var(r.rhs)) {
      throw PreconditionViolation(std::string(which) + " rule is extracting");
    }
    if (!r.from_bottom && store.depth(r.lhs) > 1) {
      throw PreconditionViolation(std::string(which) + " rule has lhs deeper than 1");
    }
  };
  check(earlier, "earlier");
  check(later, "later");
  if (later.from_bottom) return false;
  if (store.is_var(later.lhs)) return true;
  Term top = earlier.rhs;
  if (store.is_leaf(later.lhs)) return store.is_leaf(top);
  if (!store.is_apply(top)) return false;
  return store.head(top) == store.head(later.lhs);
}

bool patterns_overlap(const TermStore& store, Term a, Term b) {
  if (store.is_var(a) || store.is_var(b)) return true;
  if (store.is_leaf(a) || store.is_leaf(b)) return a == b;
  if (store.head(a) != store.head(b)) return false;
  auto ac = store.children(a);
  auto bc = store.children(b);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (!patterns_overlap(store, ac[i], bc[i])) return false;
  }
  return true;
}

}  // namespace forge
