#include "forge/toolchain/fixtures.hpp"

#include "forge/error.hpp"

namespace forge {

namespace {

std::string repeat_chain(std::string_view base, std::string_view call, int n) {
  std::string out(base);
  for (int i = 0; i < n; ++i) out += "." + std::string(call);
  return out;
}

std::string s2_blowup_source() {
  std::string arg = repeat_chain("eps", "f", 32);
  return R"(program s2-blowup
mode one-type
unit E
type C(x1, x2)
fn f : eps -> C(eps, eps)
fn f : C(x1, x2) -> C(C(x2, x1), C(x1, x2))
fn g : x, x -> eps
expr g()" + arg + ", " + arg + ")\n";
}

std::vector<Fixture> build() {
  std::vector<Fixture> v;
  v.push_back({"anbncn-deep", FixtureKind::Program, "a^n b^n c^n (n >= 1) with deep patterns over unary counters",
               R"(program anbncn-deep
mode one-type
type Zero extern
type Succ(x) extern
type g1(x1, x2)
type g2(x1, x2)
type g3(x2)
unit E
prefix begin
suffix end
fn begin : eps -> g1(Zero, Zero)
fn a : g1(x1, x2) -> g1(Succ(x1), Succ(x2))
fn b : g1(Succ(x1), x2) -> g2(x1, x2)
fn b : g2(Succ(x1), x2) -> g2(x1, x2)
fn c : g2(Zero, Succ(x)) -> g3(x)
fn c : g3(Succ(x)) -> g3(x)
fn end : g3(Zero) -> eps
expr end(c(c(c(b(b(b(a(a(a(begin()))))))))))
expr end(c(c(c(b(b(a(a(a(begin())))))))))
)",
               "<polyadic, deep, linear, unary, no-typeof, one-type>"});
  v.push_back({"anbncn-nonlinear", FixtureKind::Program,
               "a^n b^n c^n (n >= 1) with shallow non-linear patterns over three counters",
               R"(program anbncn-nonlinear
mode one-type
type Zero extern
type Succ(x) extern
type g1(x1, x2, x3)
type g2(x1, x2, x3)
type g3(x1, x2, x3)
unit E
prefix begin
suffix end
fn a : g1(x1, x2, x3) -> g1(Succ(x1), x2, x3)
fn b : g1(x1, x2, x3) -> g2(x1, Succ(x2), x3)
fn b : g2(x1, x2, x3) -> g2(x1, Succ(x2), x3)
fn c : g2(x1, x2, x3) -> g3(x1, x2, Succ(x3))
fn c : g3(x1, x2, x3) -> g3(x1, x2, Succ(x3))
fn begin : eps -> g1(Zero, Zero, Zero)
fn end : g3(x, x, x) -> eps
expr end(begin().a.a.a.b.b.b.c.c.c)
expr end(begin().a.a.a.b.b.c.c.c)
)",
               "<polyadic, shallow, non-linear, unary, no-typeof, one-type>"});
  v.push_back({"ww-typeof", FixtureKind::Program, "w s w over {a, b} with full typeof, terminated by $",
               R"(program ww-typeof
mode one-type
style auto
unit E
type A(T)
type B(T)
type S(T)
alphabet a b s
suffix $
result eps
fn a : eps -> A
fn b : eps -> B
fn a : T -> A T
fn b : T -> B T
fn s : T -> S T
fn $ : A T -> typeof match_a($(T))
fn $ : B T -> typeof match_b($(T))
fn $ : S T -> typeof reverse(T)
aux reverse : A T -> typeof append2end_a(reverse(T))
aux reverse : B T -> typeof append2end_b(reverse(T))
aux reverse : eps -> eps
aux append2end_a : A T -> typeof append2start_a(append2end_a(T))
aux append2end_a : B T -> typeof append2start_b(append2end_a(T))
aux append2end_a : eps -> A
aux append2end_b : A T -> typeof append2start_a(append2end_b(T))
aux append2end_b : B T -> typeof append2start_b(append2end_b(T))
aux append2end_b : eps -> B
aux append2start_a : T -> A T
aux append2start_b : T -> B T
aux match_a : A T -> T
aux match_b : B T -> T
expr $(a(b(a(a(s(a(b(a(a())))))))))
expr $(a(b(a(a(s(a(b(b(a())))))))))
expr $(b(a(a(s(a(b(a(a()))))))))
)",
               "<monadic, deep, linear, unary, full-typeof, one-type>"});
  v.push_back({"palindrome", FixtureKind::Program, "even-length palindromes over {a, b}, terminated by $",
               R"(program palindrome
mode eventually-one
unit E
type g1(T)
type g2(T)
type g3(T)
type g4(T)
type $(T)
suffix $
fn a : eps -> g1 $
fn b : eps -> g2 $
fn a : g1 T -> g1 g3 T
fn b : g1 T -> g2 g3 T
fn a : g1 T -> T
fn a : g2 T -> g1 g4 T
fn b : g2 T -> g2 g4 T
fn b : g2 T -> T
fn a : g3 T -> T
fn b : g4 T -> T
fn $ : $ -> eps
expr eps.a.a.b.b.a.a.$
expr eps.a.b.$
)",
               "<monadic, shallow, linear, unary, no-typeof, eventually-one-type>"});
  v.push_back({"dyck-stack", FixtureKind::Program, "balanced push/pop sequences, closed by empty",
               R"(program dyck-stack
mode one-type
unit E
type Stack(T)
suffix empty
fn push : eps -> Stack
fn push : Stack T -> Stack Stack T
fn pop : Stack T -> T
fn empty : eps -> eps
expr eps.push.push.pop.pop.empty
expr eps.push.pop.pop.empty
)",
               "<monadic, shallow, linear, unary, no-typeof, one-type>"});
  v.push_back({"tm-anbn", FixtureKind::Automaton, "Turing machine for a^n b^n on a two-way tape",
               R"(automaton tm-anbn
storage tape
tape-bound two-way
states q0 q1 q2 q3 q4
initial q0
accepting q4
alphabet a b
tape-alphabet B a b
blank B
epsilon: in q0 rule B -> B- goto q4
epsilon: in q0 rule a -> B+ goto q1
epsilon: in q1 rule B -> B- goto q2
epsilon: in q1 rule a -> a+ goto q1
epsilon: in q1 rule b -> b+ goto q1
epsilon: in q2 rule b -> B- goto q3
epsilon: in q3 rule B -> B+ goto q0
epsilon: in q3 rule a -> a- goto q3
epsilon: in q3 rule b -> b- goto q3
)",
               "<stateful, unbounded-tape, word, epsilon, deterministic, linear, shallow>"});
  v.push_back({"s2-blowup", FixtureKind::Program,
               "n-ary non-linear check whose argument types grow exponentially in the expression size",
               s2_blowup_source(), "<polyadic, deep, non-linear, n-ary, no-typeof, one-type>"});
  v.push_back({"unary-counter", FixtureKind::Program, "increment and decrement on unary-encoded integers",
               R"(program unary-counter
mode one-type
type Zero
type Succ(x)
unit E
prefix zero
fn zero : eps -> Zero
fn inc : Zero -> Succ(Zero)
fn inc : Succ(x) -> Succ(Succ(x))
fn dec : Succ(x) -> x
expr zero().inc.inc.inc.inc.dec.inc
expr zero().inc.dec.dec
)",
               "<monadic, shallow, linear, unary, no-typeof, one-type>"});
  v.push_back({"anbncn-ta", FixtureKind::Automaton, "stateful tree automaton for a^n b^n c^n (n >= 1)",
               R"(automaton anbncn-ta
storage tree
states s qa qb qc f
initial s
accepting f
alphabet begin a b c end
prefix begin
suffix end
tree-alphabet eps Zero Succ(x) P(x1, x2)
delta: on begin in s rule eps -> P(Zero, Zero) goto qa
delta: on a in qa rule P(x1, x2) -> P(Succ(x1), Succ(x2)) goto qa
delta: on b in qa rule P(Succ(x1), x2) -> P(x1, x2) goto qb
delta: on b in qb rule P(Succ(x1), x2) -> P(x1, x2) goto qb
delta: on c in qb rule P(Zero, Succ(x2)) -> P(Zero, x2) goto qc
delta: on c in qc rule P(Zero, Succ(x2)) -> P(Zero, x2) goto qc
delta: on end in qc rule P(Zero, Zero) -> eps goto f
)",
               "<stateful, tree, word, real-time, deterministic, linear, deep>"});
  v.push_back({"anbncn-ta3", FixtureKind::Automaton,
               "stateless tree automaton for a^n b^n c^n (n >= 1) over rank-3 symbols",
               R"(automaton anbncn-ta3
storage tree
states q
initial q
accepting q
alphabet begin a b c end
prefix begin
suffix end
tree-alphabet eps Zero Succ(x) g1(x1, x2, x3) g2(x1, x2, x3) g3(x1, x2, x3)
delta: on begin in q rule eps -> g1(Zero, Zero, Zero) goto q
delta: on a in q rule g1(x1, x2, x3) -> g1(Succ(x1), x2, x3) goto q
delta: on b in q rule g1(x1, x2, x3) -> g2(x1, Succ(x2), x3) goto q
delta: on b in q rule g2(x1, x2, x3) -> g2(x1, Succ(x2), x3) goto q
delta: on c in q rule g2(x1, x2, x3) -> g3(x1, x2, Succ(x3)) goto q
delta: on c in q rule g3(x1, x2, x3) -> g3(x1, x2, Succ(x3)) goto q
delta: on end in q rule g3(x, x, x) -> eps goto q
)",
               "<stateless, tree, word, real-time, deterministic, non-linear, shallow>"});
  v.push_back({"greibach", FixtureKind::Grammar, "even-length non-empty palindromes in Greibach normal form",
               R"(start S;
terminals a b;
variables S g1 g2 g3 g4;
S -> a g1 | b g2;
g1 -> a g1 g3 | b g2 g3 | a;
g2 -> a g1 g4 | b g2 g4 | b;
g3 -> a;
g4 -> b;
)",
               std::nullopt});
  v.push_back({"palindrome-cfg", FixtureKind::Grammar, "even-length palindromes over {a, b}",
               R"(start S;
S -> a S a | b S b | ;
)",
               std::nullopt});
  v.push_back({"pp-example", FixtureKind::Program, "shallow polyadic program that swaps and duplicates arguments",
               R"(program pp-example
mode one-type
type g1
type g2
type g3(x1, x2)
type g4(x1, x2)
unit E
prefix begin
fn begin : eps -> g3(g1, g2)
fn a : g3(x1, x2) -> x1
fn b : g3(x1, x2) -> x2
fn c : g3(x1, x2) -> g4(g2, g3(x1, x2))
fn a : g4(x1, x2) -> g4(x2, x1)
fn b : g4(x1, x2) -> g4(g3(x1, x2), g3(x2, x1))
fn c : g4(x1, x2) -> g3(x1, x2)
expr begin().c.a.b.b.a
expr begin().a.a
)",
               "<polyadic, shallow, linear, unary, no-typeof, one-type>"});
  return v;
}

}  // namespace

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = build();
  return all;
}

const Fixture* find_fixture(std::string_view name) {
  for (const auto& f : fixtures()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

Source load_fixture(std::string_view name) {
  const Fixture* f = find_fixture(name);
  if (f == nullptr) throw Error("unknown fixture '" + std::string(name) + "'");
  switch (f->kind) {
    case FixtureKind::Program: return parse_program(f->source);
    case FixtureKind::Automaton: return parse_automaton(f->source);
    case FixtureKind::Grammar: return parse_grammar(f->source);
  }
  throw Error("unreachable fixture kind");
}

const char* to_string(FixtureKind k) {
  switch (k) {
    case FixtureKind::Program: return "program";
    case FixtureKind::Automaton: return "automaton";
    case FixtureKind::Grammar: return "grammar";
  }
  return "?";
}

}  // namespace forge
