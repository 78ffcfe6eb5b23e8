#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "forge/term/store.hpp"

namespace forge {

struct TermInfo {
  unsigned depth = 0;
  bool linear = true;
  bool grounded = true;
  std::vector<VarId> vars;  // occurrence multiset, left-to-right
};

TermInfo analyze_term(const TermStore& store, Term t);

// Distinct variables of t in first-occurrence order.
std::vector<VarId> variables_of(const TermStore& store, Term t);
bool is_linear(const TermStore& store, Term t);

class Substitution {
 public:
  std::optional<Term> find(VarId v) const;
  void bind(VarId v, Term t);
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  bool grounded(const TermStore& store) const;
  const std::vector<std::pair<VarId, Term>>& bindings() const { return bindings_; }

  friend bool operator==(const Substitution&, const Substitution&);

 private:
  std::vector<std::pair<VarId, Term>> bindings_;
};

std::optional<Substitution> match(const TermStore& store, Term pattern, Term subject);
// Extends s; on failure s may hold partial bindings.
bool match_into(const TermStore& store, Term pattern, Term subject, Substitution& s);

Term apply_substitution(TermStore& store, Term t, const Substitution& s);

struct RewriteRule {
  Term lhs;
  Term rhs;
  // lhs is the pushdown-bottom marker rather than a term
  bool from_bottom = false;

  friend bool operator==(const RewriteRule&, const RewriteRule&) = default;
};

struct MultiRewriteRule {
  std::vector<Term> lhs;
  Term rhs;

  friend bool operator==(const MultiRewriteRule&, const MultiRewriteRule&) = default;
};

bool is_valid(const TermStore& store, const RewriteRule& rule);
bool is_valid(const TermStore& store, const MultiRewriteRule& rule);
inline bool is_accumulating(const TermStore& store, const RewriteRule& r) { return !store.is_var(r.rhs); }

std::optional<Term> apply_rewrite(TermStore& store, const RewriteRule& rule, Term subject);
std::optional<Term> apply_multi_rewrite(TermStore& store, const MultiRewriteRule& rule,
                                        std::span<const Term> subjects);

RewriteRule canonicalize(TermStore& store, const RewriteRule& rule);
MultiRewriteRule canonicalize(TermStore& store, const MultiRewriteRule& rule);

// Root-only applicability of `later` after `earlier` has been applied.
bool follows(const TermStore& store, const RewriteRule& earlier, const RewriteRule& later);

// Whether some tree matches both patterns (variables of a and b are treated as
// distinct). Exact for linear patterns; for non-linear ones it may report an
// overlap that does not exist.
bool patterns_overlap(const TermStore& store, Term a, Term b);

}  // namespace forge
