#include <doctest.h>

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "fixture_util.hpp"
#include "oracles.hpp"
#include "forge/error.hpp"
#include "forge/term/syntax.hpp"
#include "forge/transforms/transforms.hpp"
#include "forge/types/check.hpp"
#include "forge/types/lattice.hpp"

using namespace forge;
using testutil::W;

namespace {

CheckResult check_expr(const TypeProgram& p, std::string_view text, CheckOptions o = {}) {
  return typecheck(p, parse_expression(p, text), o);
}

const FunctionDef& def_named(const TypeProgram& p, std::string_view name, std::string_view param) {
  for (const auto& d : p.defs) {
    if (d.name == name && !d.params.empty() && to_string(*p.store, d.params[0]) == param) return d;
  }
  throw Error("no such definition");
}

std::vector<std::string> program_fixtures() {
  std::vector<std::string> out;
  for (const auto& f : fixtures())
    if (f.kind == FixtureKind::Program && f.name != "s2-blowup") out.push_back(f.name);
  return out;
}

}  // namespace

TEST_SUITE("types.classify") {
  TEST_CASE("deep a^n b^n c^n sits below its usual filing") {
    auto p = testutil::program("anbncn-deep");
    auto got = classify_program(p);
    auto claimed = parse_point_t(*find_fixture("anbncn-deep")->claimed_point);
    REQUIRE(claimed);
    CHECK(dominates(*claimed, got));
    CHECK(got.c2 != PatternDepth::Shallow);
    CHECK(got.c3 == PatternMultiplicity::Linear);
    CHECK(got.c4 == FunctionArity::Unary);
    CHECK(got.c5 == TypeofFeature::None);
    CHECK(got.c6 == OverloadMode::OneType);
  }

  TEST_CASE("w s w program uses full typeof") {
    CHECK(classify_program(testutil::program("ww-typeof")).c5 == TypeofFeature::Full);
  }

  TEST_CASE("program without generics is the bottom point") {
    auto p = parse_program(R"(program plain
type A
type B
fn a : eps -> A
fn b : A -> B
)");
    CHECK(classify_program(p) == LatticePointT{});
  }

  TEST_CASE("non-linear fixture is non-linear") {
    CHECK(classify_program(testutil::program("anbncn-nonlinear")).c3 == PatternMultiplicity::NonLinear);
    CHECK(classify_program(testutil::program("s2-blowup")).c4 == FunctionArity::NAry);
  }
}

TEST_SUITE("types.apply") {
  TEST_CASE("increment on a unary counter") {
    auto p = testutil::program("unary-counter");
    TermStore& s = *p.store;
    auto app = apply_function(s, def_named(p, "inc", "Succ(x)"), std::vector<Term>{unary_type(s, 3)});
    REQUIRE(app.kind == Application::Kind::Direct);
    CHECK(app.type == unary_type(s, 4));
    auto r = check_expr(p, "zero().inc.inc.inc.inc.dec.inc");
    REQUIRE(r.kind == CheckResult::Kind::Typed);
    CHECK(r.type == unary_type(s, 4));
  }

  TEST_CASE("non-linear parameter compares its arguments") {
    auto p = parse_program(R"(program nl
type g(x1, x2)
fn s : g(x, x) -> x
)");
    TermStore& s = *p.store;
    const auto& d = p.defs.front();
    auto hit = apply_function(s, d, std::vector<Term>{s.apply("g", {unary_type(s, 9), unary_type(s, 9)})});
    REQUIRE(hit.kind == Application::Kind::Direct);
    CHECK(hit.type == unary_type(s, 9));
    auto miss = apply_function(s, d, std::vector<Term>{s.apply("g", {unary_type(s, 7), unary_type(s, 8)})});
    CHECK(miss.kind == Application::Kind::NoMatch);
  }

  TEST_CASE("instantiation from the unit") {
    auto p = parse_program("program i\ntype t\nfn s : eps -> t\n");
    auto app = apply_function(*p.store, p.defs.front(), std::vector<Term>{p.store->leaf()});
    REQUIRE(app.kind == Application::Kind::Direct);
    CHECK(to_string(*p.store, app.type) == to_string(*p.store, p.store->constant(p.store->symbol("t"))));
  }

  TEST_CASE("typeof clause comes back pending with the substitution applied") {
    auto p = testutil::program("ww-typeof");
    TermStore& s = *p.store;
    const FunctionDef* rev = nullptr;
    for (const auto& d : p.defs)
      if (d.name == "reverse" && d.uses_typeof && to_string(s, d.params[0]).rfind("A", 0) == 0) rev = &d;
    REQUIRE(rev);
    auto app = apply_function(s, *rev, std::vector<Term>{parse_term(s, "A B eps")});
    REQUIRE(app.kind == Application::Kind::Pending);
    CHECK(app.pending == parse_expression(p, "append2end_a(reverse(B))"));
  }

  TEST_CASE("call-free pseudo-expression types as itself") {
    auto p = testutil::program("ww-typeof");
    Term t = parse_term(*p.store, "A B eps");
    auto r = resolve_typeof(p, Expr::term(t));
    REQUIRE(r.kind == CheckResult::Kind::Typed);
    CHECK(r.type == t);
  }
}

TEST_SUITE("types.typecheck") {
  TEST_CASE("deep patterns decide a^n b^n c^n") {
    auto p = testutil::program("anbncn-deep");
    CHECK(typecheck(p, p.expressions[0]).kind == CheckResult::Kind::Typed);
    auto bad = typecheck(p, p.expressions[1]);
    CHECK(bad.kind == CheckResult::Kind::IllTyped);
    CHECK(bad.position > 0);
  }

  TEST_CASE("non-linear patterns decide a^n b^n c^n") {
    auto p = testutil::program("anbncn-nonlinear");
    CHECK(typecheck(p, p.expressions[0]).kind == CheckResult::Kind::Typed);
    CHECK(typecheck(p, p.expressions[1]).kind == CheckResult::Kind::IllTyped);
  }

  TEST_CASE("palindrome typed only when the root may pick") {
    auto p = testutil::program("palindrome");
    auto w = W("a a b b a a");
    auto ev = check_word(p, w);
    REQUIRE(ev.kind == CheckResult::Kind::Typed);
    CHECK(ev.type == p.store->leaf());
    CheckOptions one;
    one.mode = OverloadMode::OneType;
    auto r = check_word(p, w, one);
    CHECK(r.kind == CheckResult::Kind::ErrorType);
    CHECK(r.position >= 1);
    CHECK(r.position < w.size() + 1);
    CHECK(r.types.size() >= 2);
    CHECK(check_word(p, W("a b")).kind == CheckResult::Kind::IllTyped);
  }

  TEST_CASE("w s w with full typeof") {
    auto p = testutil::program("ww-typeof");
    CHECK(typecheck(p, p.expressions[0]).kind == CheckResult::Kind::Typed);
    CHECK(typecheck(p, p.expressions[1]).kind == CheckResult::Kind::IllTyped);
    auto third = typecheck(p, p.expressions[2]);
    CHECK(third.kind == CheckResult::Kind::IllTyped);
    CHECK(third.message.find("where") != std::string::npos);
  }

  TEST_CASE("dyck stack") {
    auto p = testutil::program("dyck-stack");
    CHECK(check_expr(p, "eps.push.push.pop.pop.empty").kind == CheckResult::Kind::Typed);
    CHECK(check_expr(p, "eps.push.pop.pop").kind == CheckResult::Kind::IllTyped);
  }

  TEST_CASE("two distinct results under one-type is an error, never a pick") {
    auto p = parse_program(R"(program twice
type A
type B
fn f : eps -> A
fn f : eps -> B
fn g : A -> A
fn g : B -> A
)");
    auto r = check_expr(p, "eps.f.g");
    CHECK(r.kind == CheckResult::Kind::ErrorType);
    CHECK(r.position == 1);
    CheckOptions ev;
    ev.mode = OverloadMode::EventuallyOneType;
    CHECK(check_expr(p, "eps.f.g", ev).kind == CheckResult::Kind::Typed);
    CHECK(check_expr(p, "eps.f", ev).kind == CheckResult::Kind::Ambiguous);
    CheckOptions multi;
    multi.mode = OverloadMode::MultipleTypes;
    auto m = check_expr(p, "eps.f", multi);
    CHECK(m.kind == CheckResult::Kind::TypedSet);
    CHECK(m.types.size() == 2);
  }

  TEST_CASE("fuel runs out on a looping typeof") {
    auto p = parse_program(R"(program loop
type A(T)
fn f : T -> typeof h(A T)
aux h : T -> typeof h(A T)
)");
    CheckOptions o;
    o.fuel = 50;
    CHECK(check_expr(p, "eps.f", o).kind == CheckResult::Kind::FuelExhausted);
  }

  TEST_CASE("erasure lint flags same-root overloads") {
    auto p = parse_program(R"(program er
type g(T)
type A
type B
fn s : g(A) -> A
fn s : g(B) -> B
fn mk : eps -> g(A)
)");
    CHECK(erasure_conflicts(p) == std::vector<std::string>{"s"});
    CHECK(check_expr(p, "eps.mk.s").kind == CheckResult::Kind::Typed);
    CheckOptions lint;
    lint.erasure_lint = true;
    CHECK(check_expr(p, "eps.mk.s", lint).kind == CheckResult::Kind::ErrorType);
  }
}

TEST_SUITE("types.words") {
  TEST_CASE("framed word and expression") {
    auto p = testutil::program("anbncn-deep");
    auto e = word_to_expression(p, W("a b c"));
    CHECK(e == parse_expression(p, "begin().a.b.c.end"));
    CHECK(expression_to_word(p, e) == W("a b c"));
  }

  TEST_CASE("empty word is the bare unit") {
    auto p = testutil::program("dyck-stack");
    p.framing = {};
    auto e = word_to_expression(p, {});
    CHECK_FALSE(e.is_call());
    CHECK(e.leaf == p.store->leaf());
    CHECK(expression_to_word(p, e).empty());
  }

  TEST_CASE("n-ary call trees have no word") {
    auto p = testutil::program("s2-blowup");
    CHECK_THROWS_AS(expression_to_word(p, p.expressions.front()), Error);
  }

  TEST_CASE("random round-trips") {
    auto p = testutil::program("palindrome");
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
      Word w;
      for (std::size_t n = rng() % 11; n > 0; --n) w.push_back(rng() % 2 ? "a" : "b");
      CHECK(expression_to_word(p, word_to_expression(p, w)) == w);
    }
  }
}

TEST_SUITE("types.properties") {
  TEST_CASE("mode refinement") {
    for (const auto& name : program_fixtures()) {
      auto p = testutil::program(name);
      if (classify_program(p).c4 == FunctionArity::NAry) continue;
      std::size_t len = p.word_alphabet().size() > 2 ? 6 : 8;
      for (const auto& w : oracle::words_upto(p.word_alphabet(), len)) {
        CheckOptions o;
        o.mode = OverloadMode::OneType;
        auto one = check_word(p, w, o);
        o.mode = OverloadMode::EventuallyOneType;
        auto ev = check_word(p, w, o);
        o.mode = OverloadMode::MultipleTypes;
        auto multi = check_word(p, w, o);
        if (one.kind == CheckResult::Kind::Typed) CHECK_MESSAGE(ev.kind == CheckResult::Kind::Typed, name);
        if (ev.kind == CheckResult::Kind::Typed) CHECK_MESSAGE(multi.typed(), name);
      }
    }
  }

  TEST_CASE("no typeof means one application per letter") {
    for (const auto& name : program_fixtures()) {
      auto p = testutil::program(name);
      if (classify_program(p).c5 != TypeofFeature::None || p.mode != OverloadMode::OneType) continue;
      std::size_t len = p.word_alphabet().size() > 2 ? 7 : 10;
      for (const auto& w : oracle::words_upto(p.word_alphabet(), len)) {
        std::size_t n = p.framing.apply(w).size();
        CheckOptions o;
        o.fuel = n;
        auto r = check_word(p, w, o);
        CHECK(r.kind != CheckResult::Kind::FuelExhausted);
        if (r.typed()) CHECK(r.applications == n);
        CHECK(r.applications <= n);
      }
    }
  }

  TEST_CASE("doubled types compare in constant time") {
    auto p = testutil::program("s2-blowup");
    auto start = std::chrono::steady_clock::now();
    auto r = typecheck(p, p.expressions.front());
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    CHECK(r.kind == CheckResult::Kind::Typed);
    CHECK(r.applications == 65);
    CHECK(ms < 1000);
  }

  TEST_CASE("fixture verdicts match the word predicates") {
    auto deep = testutil::program("anbncn-deep");
    auto nl = testutil::program("anbncn-nonlinear");
    for (const auto& w : oracle::words_upto({"a", "b", "c"}, 9)) {
      bool want = oracle::anbncn(w);
      CHECK(check_word(deep, w).typed() == want);
      CHECK(check_word(nl, w).typed() == want);
    }
    auto dyck = testutil::program("dyck-stack");
    for (const auto& w : oracle::words_upto({"push", "pop"}, 8))
      CHECK(check_word(dyck, w).typed() == oracle::balanced(w, "push", "pop"));
    auto pal = testutil::program("palindrome");
    for (const auto& w : oracle::words_upto({"a", "b"}, 8))
      CHECK(check_word(pal, w).typed() == (oracle::even_palindrome(w) && !w.empty()));
  }
}
