#include "forge/types/lattice.hpp"

#include <algorithm>

#include "forge/term/term.hpp"

namespace forge {

bool dominates(const LatticePointT& u, const LatticePointT& l) {
  return u.c1 >= l.c1 && u.c2 >= l.c2 && u.c3 >= l.c3 && u.c4 >= l.c4 && u.c5 >= l.c5 && u.c6 >= l.c6;
}

std::string to_string(const LatticePointT& p) {
  static const char* c1[] = {"nyladic", "monadic", "dyadic", "polyadic"};
  static const char* c2[] = {"shallow", "almost-shallow", "deep"};
  static const char* c3[] = {"linear", "non-linear"};
  static const char* c4[] = {"unary", "n-ary"};
  static const char* c5[] = {"no-typeof", "rudimentary-typeof", "full-typeof"};
  static const char* c6[] = {"one-type", "eventually-one-type", "multiple-types"};
  return std::string("<") + c1[static_cast<int>(p.c1)] + ", " + c2[static_cast<int>(p.c2)] + ", " +
         c3[static_cast<int>(p.c3)] + ", " + c4[static_cast<int>(p.c4)] + ", " + c5[static_cast<int>(p.c5)] + ", " +
         c6[static_cast<int>(p.c6)] + ">";
}

LatticePointT fluent_point() {
  LatticePointT p;
  p.c1 = ArgArity::Monadic;
  p.c2 = PatternDepth::Deep;
  p.c5 = TypeofFeature::Rudimentary;
  return p;
}

LatticePointT pp_point() {
  LatticePointT p;
  p.c1 = ArgArity::Polyadic;
  return p;
}

namespace {

bool call_free(const Expr& e) { return !e.is_call(); }

bool rudimentary(const Expr& body) {
  if (!body.is_call()) return true;
  return std::all_of(body.args.begin(), body.args.end(), call_free);
}

}  // namespace

LatticePointT classify_program(const TypeProgram& p) {
  check_well_formed(p);
  const TermStore& store = *p.store;
  LatticePointT out;
  switch (std::min(store.max_rank(), 3u)) {
    case 0: out.c1 = ArgArity::Nyladic; break;
    case 1: out.c1 = ArgArity::Monadic; break;
    case 2: out.c1 = ArgArity::Dyadic; break;
    default: out.c1 = ArgArity::Polyadic; break;
  }
  unsigned depth = 0;
  bool linear = true;
  std::size_t arity = 0;
  bool any_typeof = false;
  bool full = false;
  for (const auto& d : p.defs) {
    arity = std::max(arity, d.params.size());
    std::vector<VarId> seen;
    for (Term t : d.params) {
      auto info = analyze_term(store, t);
      depth = std::max(depth, info.depth);
      for (VarId v : info.vars) {
        if (std::find(seen.begin(), seen.end(), v) != seen.end()) linear = false;
        seen.push_back(v);
      }
    }
    if (d.uses_typeof) {
      any_typeof = true;
      if (!rudimentary(d.body)) full = true;
    }
  }
  out.c2 = depth <= 1 ? PatternDepth::Shallow : depth == 2 ? PatternDepth::AlmostShallow : PatternDepth::Deep;
  out.c3 = linear ? PatternMultiplicity::Linear : PatternMultiplicity::NonLinear;
  out.c4 = arity > 1 ? FunctionArity::NAry : FunctionArity::Unary;
  out.c5 = full ? TypeofFeature::Full : any_typeof ? TypeofFeature::Rudimentary : TypeofFeature::None;
  out.c6 = p.mode;
  return out;
}

}  // namespace forge
