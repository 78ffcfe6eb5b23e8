#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "fixture_util.hpp"
#include "oracles.hpp"
#include "forge/error.hpp"
#include "forge/grammar/cfg.hpp"
#include "forge/toolchain/random.hpp"
#include "forge/types/check.hpp"
#include "forge/types/lattice.hpp"

using namespace forge;
using testutil::W;

namespace {

std::vector<Word> cyk_sweep(const Cfg& g, std::size_t n) {
  std::vector<Word> out;
  for (const auto& w : oracle::words_upto(g.terminals, n))
    if (cyk_membership(g, w)) out.push_back(w);
  return out;
}

// Variable stacks reachable by leftmost derivations that have produced `prefix`.
std::set<std::vector<std::string>> lmd_stacks(const Cfg& g, const Word& prefix) {
  std::set<std::vector<std::string>> cur{{g.start}};
  for (const auto& letter : prefix) {
    std::set<std::vector<std::string>> next;
    for (const auto& stack : cur) {
      if (stack.empty()) continue;
      for (const auto& r : g.rules) {
        if (r.lhs != stack.front() || r.rhs.empty() || r.rhs.front() != letter) continue;
        std::vector<std::string> s(r.rhs.begin() + 1, r.rhs.end());
        s.insert(s.end(), stack.begin() + 1, stack.end());
        next.insert(std::move(s));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

TEST_SUITE("grammar.gnf") {
  TEST_CASE("palindromes convert to an equivalent normal form") {
    auto g = testutil::grammar("palindrome-cfg");
    auto n = to_gnf(g);
    CHECK(is_gnf(n));
    CHECK_FALSE(is_gnf(g));
    auto ref = testutil::grammar("greibach");
    for (const auto& w : oracle::words_upto({"a", "b"}, 8)) {
      bool want = oracle::even_palindrome(w);
      CHECK(oracle::earley(n, w) == want);
      CHECK(oracle::earley(g, w) == want);
      // the reference grammar has no empty word
      if (!w.empty()) CHECK(oracle::earley(ref, w) == want);
    }
  }

  TEST_CASE("normal form input is kept") {
    auto g = testutil::grammar("greibach");
    REQUIRE(is_gnf(g));
    auto n = to_gnf(g);
    std::multiset<std::size_t> a, b;
    for (const auto& r : g.rules) a.insert(r.rhs.size());
    for (const auto& r : n.rules) b.insert(r.rhs.size());
    CHECK(n.rules.size() == g.rules.size());
    CHECK(a == b);
    CHECK(cyk_sweep(n, 8) == cyk_sweep(g, 8));
  }

  TEST_CASE("grammar of the empty word") {
    auto g = parse_grammar("start S;\nS -> ;\n");
    auto n = to_gnf(g);
    REQUIRE(n.rules.size() == 1);
    CHECK(n.rules[0].lhs == n.start);
    CHECK(n.rules[0].rhs.empty());
  }

  TEST_CASE("empty word rule present exactly when the language has it") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      auto g = random_cfg(seed);
      auto n = to_gnf(g);
      bool eps_rule = std::any_of(n.rules.begin(), n.rules.end(), [](const Production& p) { return p.rhs.empty(); });
      CHECK(eps_rule == oracle::earley(g, {}));
    }
  }
}

TEST_SUITE("grammar.program") {
  TEST_CASE("reference grammar gives the palindrome program shape") {
    auto p = gnf_to_program(testutil::grammar("greibach"));
    for (auto t : {"g1", "g2", "g3", "g4", "$"}) {
      REQUIRE(p.store->find(t));
      CHECK(p.store->rank(*p.store->find(t)) == 1);
    }
    auto pt = classify_program(p);
    CHECK(pt.c1 == ArgArity::Monadic);
    CHECK(pt.c6 == OverloadMode::EventuallyOneType);
    CHECK(p.framing.suffix == Word{"$"});
    auto fixture = testutil::program("palindrome");
    CHECK(p.defs.size() == fixture.defs.size());
  }

  TEST_CASE("chain verdicts") {
    auto p = gnf_to_program(testutil::grammar("greibach"));
    auto yes = check_word(p, W("a a b b a a"));
    REQUIRE(yes.kind == CheckResult::Kind::Typed);
    CHECK(yes.type == p.store->leaf());
    CHECK_FALSE(check_word(p, W("a a b")).typed());
  }

  TEST_CASE("non-normal input is refused") {
    CHECK_THROWS_AS(gnf_to_program(testutil::grammar("palindrome-cfg")), Error);
  }

  TEST_CASE("type sets follow leftmost derivations") {
    for (const Cfg& g : {testutil::grammar("greibach"), to_gnf(testutil::grammar("palindrome-cfg")),
                         to_gnf(random_cfg(3)), to_gnf(random_cfg(8))}) {
      auto p = gnf_to_program(g, OverloadMode::MultipleTypes);
      TermStore& s = *p.store;
      for (const auto& w : oracle::words_upto(g.terminals, 6)) {
        if (w.empty()) continue;
        Expr e = Expr::term(s.leaf());
        for (const auto& l : w) e = Expr::call(l, {e});
        auto r = typecheck(p, e);
        std::set<Term> got;
        if (r.kind == CheckResult::Kind::Typed) got.insert(r.type);
        for (Term t : r.types) got.insert(t);
        std::set<Term> want;
        for (const auto& stack : lmd_stacks(g, w)) {
          Term t = s.apply("$", {s.leaf()});
          for (std::size_t i = stack.size(); i-- > 0;) t = s.apply(stack[i], {t});
          want.insert(t);
        }
        CHECK_MESSAGE(got == want, join_word(w));
      }
    }
  }

  TEST_CASE("multiple types on random grammars") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto g = random_cfg(seed);
      auto p = gnf_to_program(to_gnf(g), OverloadMode::MultipleTypes);
      for (const auto& w : oracle::words_upto(g.terminals, 6))
        CHECK_MESSAGE(check_word(p, w).typed() == oracle::earley(g, w), "seed " << seed << ": " << join_word(w));
    }
  }
}

TEST_SUITE("grammar.cyk") {
  TEST_CASE("palindrome membership") {
    auto g = testutil::grammar("palindrome-cfg");
    CHECK(cyk_membership(g, W("a b b a")));
    CHECK_FALSE(cyk_membership(g, W("a b b")));
    CHECK(cyk_membership(g, {}));
    CHECK_FALSE(cyk_membership(testutil::grammar("greibach"), {}));
  }

  TEST_CASE("agrees with an Earley recognizer") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto g = random_cfg(seed);
      for (const auto& w : oracle::words_upto(g.terminals, 6))
        CHECK_MESSAGE(cyk_membership(g, w) == oracle::earley(g, w), "seed " << seed);
    }
  }

  TEST_CASE("enumeration") {
    auto g = testutil::grammar("palindrome-cfg");
    CHECK(enumerate_words(g, 4) ==
          std::vector<Word>{{}, W("a a"), W("b b"), W("a a a a"), W("a b b a"), W("b a a b"), W("b b b b")});
    CHECK(enumerate_words(g, 6) == cyk_sweep(g, 6));
    CHECK(enumerate_words(parse_grammar("start S;\nterminals a;\nS -> S a;\n"), 5).empty());
    CHECK(enumerate_words(parse_grammar("start S;\nS -> ;\n"), 5) == std::vector<Word>{{}});
  }

  TEST_CASE("reserved terminator") {
    CHECK_THROWS_AS(parse_grammar("start S;\nS -> $ S | ;\n").check(), Error);
  }
}

TEST_SUITE("grammar.properties") {
  TEST_CASE("normal form preserves the language of random grammars") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      auto g = random_cfg(seed);
      auto n = to_gnf(g);
      CHECK(is_gnf(n));
      for (const auto& w : oracle::words_upto(g.terminals, 8))
        CHECK_MESSAGE(oracle::earley(n, w) == oracle::earley(g, w), "seed " << seed << ": " << join_word(w));
    }
  }
}
