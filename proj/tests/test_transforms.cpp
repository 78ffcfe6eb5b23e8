#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "fixture_util.hpp"
#include "oracles.hpp"
#include "forge/automata/run.hpp"
#include "forge/error.hpp"
#include "forge/term/syntax.hpp"
#include "forge/toolchain/random.hpp"
#include "forge/toolchain/verify.hpp"
#include "forge/transforms/transforms.hpp"
#include "forge/types/check.hpp"
#include "forge/types/lattice.hpp"

using namespace forge;
using testutil::W;

namespace {

const char* kSwapper = R"(automaton swapper
storage tree
states q
initial q
accepting q
alphabet i p r e f
tree-alphabet eps g0 g1(x) g2(x1, x2) g3(x1, x2, x3)
delta: on i in q rule eps -> g2(g0(), g0()) goto q
delta: on p in q rule g2(x1, x2) -> g3(x2, g1(x1), g0()) goto q
delta: on r in q rule g3(x1, x2, x3) -> g2(g2(x2, x1), x1) goto q
delta: on e in q rule g2(x1, x2) -> x1 goto q
delta: on f in q rule g2(x1, x2) -> x2 goto q
)";

std::vector<std::string> rule_texts(const AutomatonSpec& a, const std::string& from, const std::string& to) {
  std::vector<std::string> out;
  for (const auto& it : a.epsilon) {
    if (a.states[index(it.from)] != from || a.states[index(it.to)] != to) continue;
    out.push_back(to_string(*a.store, canonicalize(*a.store, std::get<RewriteRule>(it.rewrite))));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> chain_names(const TermStore& s, Term t) {
  std::vector<std::string> out;
  for (; s.is_apply(t); t = s.child(t, 0)) out.push_back(s.name(s.head(t)));
  return out;
}

void strip_blanks(std::vector<std::string>& v) {
  while (!v.empty() && v.back() == "B") v.pop_back();
}

// Every main-state visit of the DPDA decodes to the TA's storage at the same input position.
void check_stack_decoding(const AutomatonSpec& ta, const TaDpda& td, const Word& w) {
  RunOptions o;
  o.trace = true;
  auto ta_run = run_framed(ta, w, o);
  auto dp_run = run_framed(td.dpda, w, o);
  CHECK(ta_run.accepted() == dp_run.accepted());
  for (const auto& id : dp_run.trace) {
    if (!td.is_main_state(id.state)) continue;
    REQUIRE(id.consumed < ta_run.trace.size());
    const auto& ref = ta_run.trace[id.consumed];
    CHECK(index(id.state) == index(ref.state));
    CHECK_MESSAGE(td.decode(id.tree) == ref.tree, ta.name << " on " << join_word(w) << " at " << id.consumed);
  }
}

std::vector<Word> accepted_words(const Source& s, const std::vector<std::string>& alphabet, std::size_t n) {
  std::vector<Word> out;
  for (const auto& w : oracle::words_upto(alphabet, n))
    if (membership(s, w) == Verdict::Accept) out.push_back(w);
  return out;
}

}  // namespace

TEST_SUITE("transforms.unary") {
  TEST_CASE("unary encoding") {
    TermStore s;
    Term zero = unary_type(s, 0);
    CHECK(zero == s.constant(s.symbol("Zero")));
    for (std::size_t k = 1; k < 6; ++k) {
      CHECK(unary_type(s, k) == s.apply("Succ", {unary_type(s, k - 1)}));
      CHECK(s.depth(unary_type(s, k)) == k);
    }
  }
}

TEST_SUITE("transforms.tm_to_ta") {
  TEST_CASE("one tape transition becomes four tree rules") {
    auto tm = testutil::automaton("tm-anbn");
    auto ta = tm_to_ta(tm, W("a a b b")).result;
    auto got = rule_texts(ta, "q0", "q1");
    TermStore& s = *ta.store;
    std::vector<std::string> expect;
    for (auto text : {"O(xL, a(eps), a(xR)) -> O(B(xL), a(eps), xR)", "O(xL, a(eps), b(xR)) -> O(B(xL), b(eps), xR)",
                      "O(xL, a(eps), B(xR)) -> O(B(xL), B(eps), xR)", "O(xL, a(eps), eps) -> O(B(xL), B(eps), eps)"}) {
      expect.push_back(to_string(s, canonicalize(s, parse_rule(s, text))));
    }
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);
  }

  TEST_CASE("tape around the head as a joiner tree") {
    auto ta = tm_to_ta(testutil::automaton("tm-anbn"), W("a b")).result;
    TermStore& s = *ta.store;
    Term t = tape_to_tree(ta, {"b"}, "a", {"a", "b", "b"});
    CHECK(t == parse_term(s, "O(b(eps), a(eps), a(b(b(eps))))"));
  }

  TEST_CASE("initial storage embeds the input") {
    auto ta = tm_to_ta(testutil::automaton("tm-anbn"), W("a a b b")).result;
    CHECK(ta.initial_tree == parse_term(*ta.store, "O(eps, a(eps), a(b(b(eps))))"));
  }

  TEST_CASE("tree automaton reaches the same verdict") {
    auto tm = testutil::automaton("tm-anbn");
    for (const auto& w : oracle::words_upto({"a", "b"}, 6)) {
      auto ta = tm_to_ta(tm, w).result;
      CHECK_MESSAGE(run(ta, {}).accepted() == run(tm, w).accepted(), join_word(w));
    }
    auto ta = tm_to_ta(tm, W("a a b b")).result;
    auto r = run(ta, {});
    REQUIRE(r.accepted());
    CHECK(ta.states[index(r.final_id->state)] == "q4");
  }

  TEST_CASE("joiner tree tracks the tape at every step") {
    auto tm = testutil::automaton("tm-anbn");
    for (const auto& w : oracle::words_upto({"a", "b"}, 5)) {
      auto ta = tm_to_ta(tm, w).result;
      RunOptions o;
      o.trace = true;
      auto rt = run(tm, w, o);
      auto ra = run(ta, {}, o);
      REQUIRE(rt.trace.size() == ra.trace.size());
      const TermStore& s = *ta.store;
      for (std::size_t i = 0; i < rt.trace.size(); ++i) {
        const auto& tape = rt.trace[i].tape;
        auto name = [&](long pos) {
          int c = tape.at(pos);
          return c < 0 ? std::string("B") : tm.tape_alphabet[static_cast<std::size_t>(c)];
        };
        Term tree = ra.trace[i].tree;
        CHECK(chain_names(s, s.child(tree, 1)) == std::vector<std::string>{name(tape.head)});
        std::vector<std::string> left, right;
        for (long p = tape.head - 1; p >= std::min(tape.origin, tape.head) - 1; --p) left.push_back(name(p));
        for (long p = tape.head + 1; p <= tape.origin + static_cast<long>(tape.cells.size()); ++p)
          right.push_back(name(p));
        auto tl = chain_names(s, s.child(tree, 0));
        auto tr = chain_names(s, s.child(tree, 2));
        strip_blanks(left);
        strip_blanks(right);
        strip_blanks(tl);
        strip_blanks(tr);
        CHECK(tl == left);
        CHECK(tr == right);
      }
    }
  }

  TEST_CASE("non-tape input is rejected") {
    CHECK_THROWS_AS(tm_to_ta(testutil::automaton("anbncn-ta"), W("a b c")), Error);
  }
}

TEST_SUITE("transforms.ta_to_typeof") {
  TEST_CASE("turing machine through typeof") {
    auto tm = testutil::automaton("tm-anbn");
    std::vector<Word> words{W("a a a a b b b b"), W("a a a a b a b b"), W("a a a b b b b")};
    auto p = tm_to_typeof_program(tm, words).result;
    REQUIRE(p.expressions.size() == 3);
    CheckOptions o;
    o.fuel = 100000;
    CHECK(typecheck(p, p.expressions[0], o).kind == CheckResult::Kind::Typed);
    CHECK(typecheck(p, p.expressions[1], o).kind == CheckResult::Kind::IllTyped);
    CHECK(typecheck(p, p.expressions[2], o).kind == CheckResult::Kind::IllTyped);
    CHECK(classify_program(p).c5 == TypeofFeature::Rudimentary);
  }

  TEST_CASE("typeof verdicts agree with the machine on short words") {
    auto tm = testutil::automaton("tm-anbn");
    auto words = oracle::words_upto({"a", "b"}, 6);
    auto p = tm_to_typeof_program(tm, words).result;
    REQUIRE(p.expressions.size() == words.size());
    for (std::size_t i = 0; i < words.size(); ++i)
      CHECK(typecheck(p, p.expressions[i]).typed() == oracle::anbn(words[i]));
  }

  TEST_CASE("machine that accepts at once") {
    auto tm = parse_automaton(R"(automaton yes
storage tape
states q0
initial q0
accepting q0
alphabet a
tape-alphabet B a
blank B
)");
    auto p = tm_to_typeof_program(tm, std::vector<Word>{{}}).result;
    CHECK(typecheck(p, p.expressions.front()).kind == CheckResult::Kind::Typed);
  }
}

TEST_SUITE("transforms.rudimentary_to_ta") {
  TEST_CASE("single instantiation") {
    auto p = parse_program("program one\ntype g(x)\nfn s : eps -> g eps\n");
    auto ta = rudimentary_to_ta(p).result;
    CHECK(ta.states.size() == 1);
    CHECK(ta.delta.size() == 1);
    CHECK(ta.epsilon.empty());
    CHECK(ta.is_accepting(ta.initial));
  }

  TEST_CASE("forwarding chain visits each auxiliary state") {
    auto p = parse_program(R"(program fw
type g(x)
type h(x)
type k(x)
fn s : eps -> typeof f1(g(eps))
aux f1 : g(x) -> typeof f2(h(x))
aux f2 : h(x) -> k(x)
fn t : k(x) -> x
)");
    auto ta = rudimentary_to_ta(p).result;
    RunOptions o;
    o.trace = true;
    auto r = run(ta, W("s t"), o);
    REQUIRE(r.accepted());
    std::vector<std::string> visited;
    for (const auto& id : r.trace) visited.push_back(ta.states[index(id.state)]);
    CHECK(visited == std::vector<std::string>{"q0", "q_f1", "q_f2", "q0", "q0"});
  }

  TEST_CASE("full typeof is rejected") {
    CHECK_THROWS_AS(rudimentary_to_ta(testutil::program("ww-typeof")), UnsupportedFeature);
  }

  TEST_CASE("fixture agreement") {
    for (auto name : {"anbncn-deep", "anbncn-nonlinear", "dyck-stack", "unary-counter", "pp-example"}) {
      auto p = testutil::program(name);
      auto ta = rudimentary_to_ta(p).result;
      std::size_t n = p.word_alphabet().size() > 2 ? 7 : 8;
      for (const auto& w : oracle::words_upto(p.word_alphabet(), n))
        CHECK_MESSAGE(check_word(p, w).typed() == run_framed(ta, w).accepted(), name << " " << join_word(w));
    }
  }

  TEST_CASE("random rudimentary programs") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
      auto p = random_rudimentary_program(seed);
      auto ta = rudimentary_to_ta(p).result;
      for (const auto& w : oracle::words_upto(p.word_alphabet(), 5))
        CHECK_MESSAGE(check_word(p, w).typed() == run_framed(ta, w).accepted(), "seed " << seed);
    }
  }
}

TEST_SUITE("transforms.fluent_to_dpda") {
  TEST_CASE("stack rewrites for the three shapes") {
    auto p = parse_program(R"(program fl
type g1(x)
type g2(x)
type g3(x)
fn a : g1 g2 eps -> g3 eps
fn b : g1 x -> g2 eps
fn c : g1 x -> g2 x
)");
    auto d = fluent_to_dpda(p).result;
    TermStore& s = *d.store;
    std::map<std::string, std::string> by_letter;
    for (const auto& it : d.delta)
      by_letter[d.alphabet[it.letter]] = to_string(s, canonicalize(s, std::get<RewriteRule>(it.rewrite)));
    auto canon = [&](const char* text) { return to_string(s, canonicalize(s, parse_rule(s, text))); };
    // E is the explicit stack bottom
    CHECK(by_letter["a"] == canon("g1 g2 E y -> g3 E y"));
    CHECK(by_letter["b"] == canon("g1 x -> g2 E x"));
    CHECK(by_letter["c"] == canon("g1 x -> g2 x"));
  }

  TEST_CASE("dyck program and its automaton agree up to ten letters") {
    auto p = testutil::program("dyck-stack");
    auto conv = fluent_to_dpda(p);
    CHECK(validate(conv.result).point.determinism == DeterminismFeature::Deterministic);
    auto rep = verify_bisimulation(p, conv.result, VerifyOptions{10});
    CHECK(rep.ok());
    CHECK(rep.fuel_exhausted.empty());
    for (const auto& w : oracle::words_upto({"push", "pop"}, 10))
      CHECK(run_framed(conv.result, w).accepted() == oracle::balanced(w, "push", "pop"));
  }

  TEST_CASE("stack spells the type after every letter") {
    auto p = testutil::program("unary-counter");
    auto d = fluent_to_dpda(p).result;
    RunOptions o;
    o.trace = true;
    Word w = W("inc inc dec inc");
    auto r = run_framed(d, w, o);
    REQUIRE(r.accepted());
    Word framed = p.framing.apply(w);
    for (std::size_t i = 1; i <= framed.size(); ++i) {
      Word part(framed.begin(), framed.begin() + static_cast<long>(i));
      Expr e = Expr::term(p.store->leaf());
      for (const auto& l : part) e = Expr::call(l, {e});
      auto t = typecheck(p, e);
      REQUIRE(t.kind == CheckResult::Kind::Typed);
      // last ID that consumed exactly i letters
      const InstantaneousDescription* at = nullptr;
      for (const auto& id : r.trace)
        if (id.consumed == i) at = &id;
      REQUIRE(at);
      CHECK(decode_fluent_stack(d, p, at->tree) == t.type);
    }
  }

  TEST_CASE("full typeof is above the fluent point") {
    CHECK_THROWS_AS(fluent_to_dpda(testutil::program("ww-typeof")), Error);
  }

  TEST_CASE("random fluent programs stay deterministic") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto p = random_fluent_program(seed);
      auto d = fluent_to_dpda(p).result;
      CHECK(validate(d).point.determinism == DeterminismFeature::Deterministic);
      auto rep = verify_bisimulation(p, d, VerifyOptions{5});
      CHECK_MESSAGE(rep.ok(), "seed " << seed);
    }
  }
}

TEST_SUITE("transforms.ta_to_dpda") {
  TEST_CASE("extracting a child rewrites the rule on top") {
    auto ta = parse_automaton(kSwapper);
    auto td = ta_to_dpda(ta);
    RunOptions o;
    o.trace = true;
    auto r = run(td.dpda, W("i p r e"), o);
    REQUIRE(r.accepted());
    const TermStore& st = *td.dpda.store;
    Term top = r.final_id->tree;
    std::size_t k = std::stoul(st.name(st.head(top)).substr(1));
    TermStore& src = *td.source_store;
    CHECK(canonicalize(src, td.rules[k]) == canonicalize(src, parse_rule(src, "g3(x1, x2, x3) -> g2(x2, x1)")));
    check_stack_decoding(ta, td, W("i p r e"));
  }

  TEST_CASE("extracting the second child pops through the stack") {
    auto ta = parse_automaton(kSwapper);
    auto td = ta_to_dpda(ta);
    for (auto text : {"i p r f", "i p r e f", "i p r e p r f", "i p r e e"}) check_stack_decoding(ta, td, W(text));
    auto rep = verify_bisimulation(ta, td.dpda, VerifyOptions{6});
    CHECK(rep.ok());
    CHECK(validate(td.dpda).point.determinism == DeterminismFeature::Deterministic);
  }

  TEST_CASE("fixtures agree and decode") {
    std::vector<AutomatonSpec> tas{parse_automaton(kSwapper)};
    for (auto name : {"pp-example", "dyck-stack", "unary-counter"})
      tas.push_back(rudimentary_to_ta(testutil::program(name)).result);
    for (const auto& ta : tas) {
      auto td = ta_to_dpda(ta);
      std::size_t n = ta.word_alphabet().size() > 3 ? 5 : 8;
      auto rep = verify_bisimulation(ta, td.dpda, VerifyOptions{n});
      CHECK_MESSAGE(rep.ok(), ta.name);
      for (const auto& w : oracle::words_upto(ta.word_alphabet(), std::min<std::size_t>(n, 5)))
        check_stack_decoding(ta, td, w);
    }
  }

  TEST_CASE("random restricted automata") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto ta = random_restricted_ta(seed);
      auto td = ta_to_dpda(ta);
      CHECK(validate(td.dpda).point.determinism == DeterminismFeature::Deterministic);
      CHECK_MESSAGE(verify_bisimulation(ta, td.dpda, VerifyOptions{6}).ok(), "seed " << seed);
      for (const auto& w : oracle::words_upto(ta.word_alphabet(), 4)) check_stack_decoding(ta, td, w);
    }
  }

  TEST_CASE("deep left-hand sides are refused") {
    CHECK_THROWS_AS(ta_to_dpda(testutil::automaton("anbncn-ta")), ConversionError);
    auto ta = parse_automaton(R"(automaton deep
storage tree
states q
initial q
accepting q
alphabet a
tree-alphabet eps g(x)
delta: on a in q rule g(g(x)) -> x goto q
)");
    CHECK_THROWS_AS(ta_to_dpda(ta), ConversionError);
  }
}

TEST_SUITE("transforms.polyadic_to_dyadic") {
  TEST_CASE("rank-3 symbol becomes a chain") {
    auto ta = parse_automaton(R"(automaton circ
storage tree
states q
initial q
accepting q
alphabet s
tree-alphabet eps a b c O(x1, x2, x3)
initial-storage O(a, b, c)
delta: on s in q rule O(x1, x2, x3) -> O(x2, x3, x1) goto q
)");
    auto d = polyadic_to_dyadic(ta).result;
    CHECK(d.store->max_rank() == 2);
    CHECK(d.initial_tree == parse_term(*d.store, "O_1(a, O_2(b, O_3(c)))"));
    CHECK(d.store->rank(d.store->symbol("O_3")) == 1);
  }

  TEST_CASE("dyadic input is left alone") {
    auto ta = parse_automaton(kSwapper);
    ta.store = std::make_shared<TermStore>(*ta.store);
    auto dy = testutil::automaton("anbncn-ta");
    auto out = polyadic_to_dyadic(dy).result;
    CHECK(print_automaton(out).substr(print_automaton(out).find('\n')) ==
          print_automaton(dy).substr(print_automaton(dy).find('\n')));
  }

  TEST_CASE("idempotent on its own output") {
    auto once = polyadic_to_dyadic(testutil::automaton("anbncn-ta3")).result;
    auto twice = polyadic_to_dyadic(once).result;
    CHECK(print_automaton(twice).substr(print_automaton(twice).find('\n')) ==
          print_automaton(once).substr(print_automaton(once).find('\n')));
  }

  TEST_CASE("rank-3 a^n b^n c^n automaton keeps its language") {
    auto ta = testutil::automaton("anbncn-ta3");
    auto d = polyadic_to_dyadic(ta).result;
    CHECK(d.store->max_rank() == 2);
    for (const auto& w : oracle::words_upto({"a", "b", "c"}, 9)) {
      bool want = oracle::anbncn(w);
      CHECK(run_framed(ta, w).accepted() == want);
      CHECK(run_framed(d, w).accepted() == want);
    }
  }
}
