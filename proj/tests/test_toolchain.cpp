#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixture_util.hpp"
#include "oracles.hpp"
#include "forge/error.hpp"
#include "forge/toolchain/emit.hpp"
#include "forge/toolchain/verify.hpp"
#include "forge/transforms/transforms.hpp"
#include "forge/types/lattice.hpp"

using namespace forge;
using testutil::W;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(FORGE_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypeProgram turing_program() {
  auto tm = testutil::automaton("tm-anbn");
  std::vector<Word> words{W("a a a a b b b b"), W("a a a a b a b b"), W("a a a b b b b")};
  return tm_to_typeof_program(tm, words).result;
}

}  // namespace

TEST_SUITE("toolchain.emit") {
  TEST_CASE("deep a^n b^n c^n as java generics") {
    auto text = emit(testutil::program("anbncn-deep"), EmitOptions{EmitTarget::Java});
    CHECK(same_source(text, read_golden("anbncn-deep.java")));
  }

  TEST_CASE("w s w as c++ templates") {
    auto text = emit(testutil::program("ww-typeof"), EmitOptions{EmitTarget::Cpp});
    CHECK(same_source(text, read_golden("ww-typeof.cpp")));
  }

  TEST_CASE("turing machine as c++ templates") {
    auto text = emit(turing_program(), EmitOptions{EmitTarget::Cpp});
    CHECK(same_source(text, read_golden("tm-anbn.cpp")));
  }

  TEST_CASE("golden comparison ignores layout and comments but not order") {
    CHECK(same_source("struct A {};\n// note\nstruct B {};", "struct A {}; /* x */ struct B {};"));
    CHECK_FALSE(same_source("struct A {}; struct B {};", "struct B {}; struct A {};"));
  }

  TEST_CASE("java cannot express overload sets or typeof") {
    CHECK_THROWS_AS(emit(testutil::program("palindrome"), EmitOptions{EmitTarget::Java}), UnsupportedFeature);
    CHECK_THROWS_AS(emit(testutil::program("ww-typeof"), EmitOptions{EmitTarget::Java}), UnsupportedFeature);
    CHECK_NOTHROW(emit(testutil::program("palindrome"), EmitOptions{EmitTarget::Pseudo}));
  }

  TEST_CASE("output is deterministic") {
    for (const auto& f : fixtures()) {
      if (f.kind != FixtureKind::Program) continue;
      auto a = emit(testutil::program(f.name), EmitOptions{EmitTarget::Pseudo});
      auto b = emit(testutil::program(f.name), EmitOptions{EmitTarget::Pseudo});
      CHECK_MESSAGE(a == b, f.name);
    }
    CHECK(emit(turing_program(), EmitOptions{EmitTarget::Cpp}) == emit(turing_program(), EmitOptions{EmitTarget::Cpp}));
  }

  TEST_CASE("mangling is injective") {
    for (auto name : {"ww-typeof", "palindrome", "anbncn-deep"}) {
      auto p = testutil::program(name);
      for (auto t : {EmitTarget::Java, EmitTarget::Cpp}) {
        auto m = mangling(p, t);
        std::set<std::string> values;
        for (const auto& [k, v] : m) values.insert(v);
        CHECK(values.size() == m.size());
      }
    }
    auto m = mangling(testutil::program("ww-typeof"), EmitTarget::Cpp);
    CHECK(m.at("$") == "S_");
  }
}

TEST_SUITE("toolchain.dsl") {
  TEST_CASE("every fixture round-trips through text") {
    for (const auto& f : fixtures()) {
      auto once = print_source(parse_source(f.source));
      auto twice = print_source(parse_source(once));
      CHECK_MESSAGE(once == twice, f.name);
    }
  }

  TEST_CASE("every fixture round-trips through json") {
    for (const auto& f : fixtures()) {
      Source s = parse_source(f.source);
      std::string json = std::visit([](const auto& v) { return to_json(v); }, s);
      CHECK_MESSAGE(print_source(parse_source(json)) == print_source(s), f.name);
    }
  }

  TEST_CASE("empty input is an error") {
    CHECK_THROWS_AS(parse_program(""), Error);
    CHECK_THROWS_AS(parse_source("   \n# only a comment\n"), Error);
  }

  TEST_CASE("syntax errors carry a position") {
    try {
      parse_program("program p\ntype g(x)\nfn a : g(x -> x\n");
      FAIL("no error");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() > 1);
    }
    try {
      parse_automaton("automaton a\nstorage tree\nstates q\ninitial r\n");
      FAIL("no error");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 4);
    }
  }

  TEST_CASE("rank and symbol errors") {
    CHECK_THROWS_AS(parse_program("program p\ntype g(x)\nfn a : eps -> g(eps, eps)\n"), Error);
    CHECK_THROWS_AS(parse_program("program p\ntype g(x)\nfn a : g x -> y\n"), Error);
  }

  TEST_CASE("monadic abbreviation") {
    auto p = parse_program("program p\ntype g1(x)\ntype g2(x)\nfn a : eps -> g1 g2 eps\n");
    auto& s = *p.store;
    CHECK(p.defs.front().body.leaf == s.apply("g1", {s.apply("g2", {s.leaf()})}));
  }
}

TEST_SUITE("toolchain.verify") {
  TEST_CASE("deep program against the hand-built automaton") {
    auto rep = verify_bisimulation(testutil::program("anbncn-deep"), testutil::automaton("anbncn-ta"), VerifyOptions{9});
    CHECK(rep.ok());
    CHECK(rep.fuel_exhausted.empty());
    CHECK(rep.words == oracle::words_upto({"a", "b", "c"}, 9).size());
    CHECK(rep.accepted == 3);
  }

  TEST_CASE("program against itself") {
    auto p = testutil::program("palindrome");
    auto rep = verify_bisimulation(p, p, VerifyOptions{6, kDefaultFuel, true});
    CHECK(rep.ok());
    CHECK(rep.table.size() == rep.words);
  }

  TEST_CASE("different alphabets are refused") {
    CHECK_THROWS_AS(verify_bisimulation(testutil::program("dyck-stack"), testutil::program("palindrome")),
                    AlphabetMismatch);
  }

  TEST_CASE("a mismatch fails the report") {
    auto rep = verify_bisimulation(testutil::program("anbncn-deep"), testutil::automaton("anbncn-ta3"),
                                   VerifyOptions{3});
    CHECK(rep.ok());
    auto off = parse_automaton(R"(automaton all
storage none
states q
initial q
accepting q
alphabet a b c
delta: on a in q goto q
delta: on b in q goto q
delta: on c in q goto q
)");
    auto bad = verify_bisimulation(testutil::program("anbncn-deep"), off, VerifyOptions{3});
    CHECK_FALSE(bad.ok());
    CHECK(bad.mismatches.size() + bad.agreements == bad.words);
  }

  TEST_CASE("fuel-exhausted words are listed apart") {
    auto tm = testutil::automaton("tm-anbn");
    auto rep = verify_bisimulation(tm, tm, VerifyOptions{4, 5});
    CHECK(rep.ok());
    CHECK_FALSE(rep.fuel_exhausted.empty());
    CHECK(rep.agreements + rep.fuel_exhausted.size() == rep.words);
  }

  TEST_CASE("ambiguous results and the unambiguity gate") {
    auto p = parse_program(R"(program amb
mode eventually-one
type A(T)
suffix $
fn a : eps -> A eps
fn a : eps -> A A eps
fn $ : A T -> eps
fn $ : A A T -> A eps
)");
    CHECK(check_word(p, W("a")).kind == CheckResult::Kind::Ambiguous);
    MembershipOptions o;
    CHECK(membership(p, W("a"), o) == Verdict::Accept);
    o.assume_unambiguous = true;
    CHECK(membership(p, W("a"), o) == Verdict::Reject);
  }
}

TEST_SUITE("toolchain.fixtures") {
  TEST_CASE("claimed points dominate computed ones") {
    for (const auto& f : fixtures()) {
      if (!f.claimed_point) continue;
      Source s = parse_source(f.source);
      if (auto* p = std::get_if<TypeProgram>(&s)) {
        auto claimed = parse_point_t(*f.claimed_point);
        REQUIRE_MESSAGE(claimed, f.name);
        CHECK_MESSAGE(dominates(*claimed, classify_program(*p)), f.name);
      } else if (auto* a = std::get_if<AutomatonSpec>(&s)) {
        auto claimed = parse_point_a(*f.claimed_point);
        REQUIRE_MESSAGE(claimed, f.name);
        CHECK_MESSAGE(dominates(*claimed, validate(*a).point), f.name);
      }
    }
  }

  TEST_CASE("catalog lookups") {
    CHECK(find_fixture("dyck-stack") != nullptr);
    CHECK(find_fixture("nope") == nullptr);
    CHECK_THROWS_AS(load_fixture("nope"), Error);
    CHECK(fixtures().size() >= 13);
  }

  TEST_CASE("program fixtures annotate their own expressions") {
    for (auto name : {"anbncn-deep", "anbncn-nonlinear", "ww-typeof", "palindrome", "dyck-stack", "unary-counter",
                      "pp-example"}) {
      auto p = testutil::program(name);
      REQUIRE(p.expressions.size() >= 2);
      CHECK_MESSAGE(typecheck(p, p.expressions[0]).typed(), name);
      CHECK_MESSAGE(!typecheck(p, p.expressions[1]).typed(), name);
    }
  }
}
