#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "fixture_util.hpp"
#include "oracles.hpp"
#include "forge/automata/run.hpp"
#include "forge/toolchain/random.hpp"
#include "forge/transforms/transforms.hpp"

using namespace forge;
using testutil::W;

namespace {

const char* kDfa = R"(automaton even-a
storage none
states q0 q1
initial q0
accepting q0
alphabet a b
delta: on a in q0 goto q1
delta: on a in q1 goto q0
delta: on b in q0 goto q0
delta: on b in q1 goto q1
)";

// Dyck over push/pop: pushdown store and the same rules over a rank-1 tree store.
std::string dyck(const std::string& storage, const std::string& decl) {
  return "automaton dyck-" + storage + "\nstorage " + storage + "\nstates q\ninitial q\naccepting q\n" +
         "alphabet push pop\n" + decl + "\n" +
         "delta: on push in q rule x -> S x goto q\n"
         "delta: on pop in q rule S x -> x goto q\n";
}

std::vector<Word> all_accepted(const AutomatonSpec& a, std::size_t n) { return enumerate_accepted(a, n).accepted; }

// Follows every successor chain from the initial ID; records the largest fan-out.
std::size_t max_fanout(const AutomatonSpec& a, const Word& w, std::size_t limit = 400) {
  auto letters = encode_word(a, a.framing.apply(w));
  std::vector<InstantaneousDescription> frontier{initial_id(a, letters)};
  std::size_t widest = 0;
  for (std::size_t i = 0; i < limit && !frontier.empty(); ++i) {
    std::vector<InstantaneousDescription> next;
    for (const auto& id : frontier) {
      auto s = step(a, id, letters);
      widest = std::max(widest, s.size());
      next.insert(next.end(), s.begin(), s.end());
    }
    frontier = std::move(next);
  }
  return widest;
}

}  // namespace

TEST_SUITE("automata.validate") {
  TEST_CASE("finite automaton is stateful, deterministic and real-time") {
    auto a = parse_automaton(kDfa);
    auto rep = validate(a);
    CHECK(rep.ok());
    CHECK(rep.point.states == StatesFeature::Stateful);
    CHECK(rep.point.storage == StorageFeature::NoStore);
    CHECK(rep.point.epsilon == EpsilonFeature::RealTime);
    CHECK(rep.point.determinism == DeterminismFeature::Deterministic);
  }

  TEST_CASE("converted fluent fixtures are deterministic") {
    for (auto name : {"dyck-stack", "unary-counter"}) {
      auto dpda = fluent_to_dpda(testutil::program(name)).result;
      CHECK_MESSAGE(validate(dpda).point.determinism == DeterminismFeature::Deterministic, name);
    }
  }

  TEST_CASE("same letter, state and overlapping lhs is non-deterministic") {
    auto a = parse_automaton(R"(automaton nd
storage tree
states q0 q1 q2
initial q0
accepting q1 q2
alphabet a
tree-alphabet eps g(x)
delta: on a in q0 rule x -> g(x) goto q1
delta: on a in q0 rule x -> x goto q2
)");
    CHECK(validate(a).point.determinism == DeterminismFeature::NonDeterministic);
  }

  TEST_CASE("stateless means a single accepting state") {
    auto a = parse_automaton(dyck("pushdown", "stack-alphabet eps S"));
    auto p = validate(a).point;
    CHECK(p.states == StatesFeature::Stateless);
    CHECK(p.storage == StorageFeature::Pushdown);
  }

  TEST_CASE("tape machine lattice point") {
    auto p = validate(testutil::automaton("tm-anbn")).point;
    CHECK(p.storage == StorageFeature::UnboundedTape);
    CHECK(p.epsilon == EpsilonFeature::Epsilon);
    CHECK(p.determinism == DeterminismFeature::Deterministic);
  }
}

TEST_SUITE("automata.step") {
  TEST_CASE("tape rule overwrites and moves right") {
    auto tm = testutil::automaton("tm-anbn");
    auto letters = encode_word(tm, W("a a b b"));
    auto id = initial_id(tm, letters);
    CHECK(id.tape.head == 0);
    auto next = step(tm, id, letters);
    REQUIRE(next.size() == 1);
    CHECK(next[0].tape.head == 1);
    CHECK(next[0].tape.at(0) == *tm.find_tape_symbol("B"));
    CHECK(next[0].tape.at(1) == *tm.find_tape_symbol("a"));
    CHECK(tm.states[index(next[0].state)] == "q1");
  }

  TEST_CASE("no applicable item means no successors") {
    auto a = parse_automaton(dyck("pushdown", "stack-alphabet eps S"));
    auto letters = encode_word(a, W("pop"));
    CHECK(step(a, initial_id(a, letters), letters).empty());
  }
}

TEST_SUITE("automata.run") {
  TEST_CASE("turing machine verdicts") {
    auto tm = testutil::automaton("tm-anbn");
    CHECK(run(tm, W("a a a a b b b b")).kind == RunOutcome::Kind::Accept);
    CHECK(run(tm, W("a a a a b a b b")).kind == RunOutcome::Kind::Reject);
    CHECK(run(tm, W("a a a b b b b")).kind == RunOutcome::Kind::Reject);
  }

  TEST_CASE("empty word accepted in an accepting initial state without epsilon items") {
    auto a = parse_automaton(kDfa);
    CHECK(run(a, {}).accepted());
    CHECK(run(parse_automaton(dyck("pushdown", "stack-alphabet eps S")), {}).accepted());
  }

  TEST_CASE("dyck stack hangs on an extra pop") {
    auto a = parse_automaton(dyck("pushdown", "stack-alphabet eps S"));
    auto r = run(a, W("push pop pop"));
    CHECK(r.kind == RunOutcome::Kind::Reject);
    CHECK(r.reason == RunOutcome::Reason::Hang);
  }

  TEST_CASE("fuel exhaustion is its own outcome") {
    auto tm = testutil::automaton("tm-anbn");
    RunOptions o;
    o.fuel = 3;
    CHECK(run(tm, W("a a a b b b"), o).kind == RunOutcome::Kind::FuelExhausted);
  }

  TEST_CASE("non-deterministic runs explore every branch") {
    auto a = parse_automaton(R"(automaton guess
storage none
states q0 q1
initial q0
accepting q1
alphabet a
delta: on a in q0 goto q0
delta: on a in q0 goto q1
)");
    CHECK(run(a, W("a a a")).accepted());
    CHECK_FALSE(run(a, {}).accepted());
  }
}

TEST_SUITE("automata.enumerate") {
  TEST_CASE("turing machine up to six letters") {
    auto got = all_accepted(testutil::automaton("tm-anbn"), 6);
    // oracle: brute force with the a^n b^n predicate
    std::vector<Word> expect;
    for (const auto& w : oracle::words_upto({"a", "b"}, 6))
      if (oracle::anbn(w)) expect.push_back(w);
    CHECK(got == expect);
    CHECK(got == std::vector<Word>{{}, W("a b"), W("a a b b"), W("a a a b b b")});
  }

  TEST_CASE("no accepting states gives the empty language") {
    auto a = parse_automaton(R"(automaton none
storage none
states q0 q1
initial q0
alphabet a
delta: on a in q0 goto q1
)");
    CHECK(all_accepted(a, 5).empty());
  }

  TEST_CASE("tree automaton for a^n b^n c^n") {
    auto got = all_accepted(testutil::automaton("anbncn-ta"), 6);
    CHECK(got == std::vector<Word>{W("a b c"), W("a a b b c c")});
  }
}

TEST_SUITE("automata.properties") {
  TEST_CASE("validated-deterministic specs never branch") {
    std::vector<AutomatonSpec> specs{testutil::automaton("tm-anbn"), testutil::automaton("anbncn-ta"),
                                     testutil::automaton("anbncn-ta3"), parse_automaton(kDfa),
                                     fluent_to_dpda(testutil::program("dyck-stack")).result};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) specs.push_back(random_restricted_ta(seed));
    for (const auto& a : specs) {
      if (validate(a).point.determinism != DeterminismFeature::Deterministic) continue;
      for (const auto& w : oracle::words_upto(a.word_alphabet(), a.word_alphabet().size() > 3 ? 4 : 6)) {
        CHECK_MESSAGE(max_fanout(a, w) <= 1, a.name << " on " << join_word(w));
      }
    }
  }

  TEST_CASE("real-time runs take one step per letter") {
    std::vector<AutomatonSpec> specs{testutil::automaton("anbncn-ta"), parse_automaton(kDfa),
                                     parse_automaton(dyck("pushdown", "stack-alphabet eps S"))};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) specs.push_back(random_restricted_ta(seed));
    for (const auto& a : specs) {
      REQUIRE(validate(a).point.epsilon == EpsilonFeature::RealTime);
      for (const auto& w : oracle::words_upto(a.word_alphabet(), 5)) {
        auto r = run_framed(a, w);
        if (r.accepted()) CHECK(r.steps == a.framing.apply(w).size());
        CHECK(r.steps <= a.framing.apply(w).size());
      }
    }
  }

  TEST_CASE("acceptance is monotone in fuel") {
    auto tm = testutil::automaton("tm-anbn");
    for (const auto& w : oracle::words_upto({"a", "b"}, 6)) {
      RunOutcome::Kind settled = run(tm, w).kind;
      REQUIRE(settled != RunOutcome::Kind::FuelExhausted);
      bool seen_final = false;
      for (std::size_t fuel : {1, 2, 4, 8, 16, 32, 64, 128, 256, 1024}) {
        RunOptions o;
        o.fuel = fuel;
        auto k = run(tm, w, o).kind;
        if (seen_final) CHECK(k == settled);
        CHECK((k == settled || k == RunOutcome::Kind::FuelExhausted));
        if (k == settled) seen_final = true;
      }
      CHECK(seen_final);
    }
  }

  TEST_CASE("pushdown store and its rank-1 tree rendering agree") {
    auto pd = parse_automaton(dyck("pushdown", "stack-alphabet eps S"));
    auto tr = parse_automaton(dyck("tree", "tree-alphabet eps S(x)"));
    CHECK(all_accepted(pd, 8) == all_accepted(tr, 8));
    // stateless acceptance: every run that does not hang
    auto acc = all_accepted(pd, 8);
    for (const auto& w : oracle::words_upto({"push", "pop"}, 8)) {
      bool in = std::find(acc.begin(), acc.end(), w) != acc.end();
      CHECK(in == oracle::never_negative(w, "push", "pop"));
    }
  }

  TEST_CASE("linear tape hangs past the input, unbounded tape keeps going") {
    std::string body = R"(storage tape
states q0 q1
initial q0
accepting q1
alphabet a
tape-alphabet a
epsilon: in q0 rule a -> a+ goto q0
epsilon: in q0 rule _ -> a goto q0
)";
    auto lin = parse_automaton("automaton walk\ntape-bound linear\n" + body);
    auto unb = parse_automaton("automaton walk\ntape-bound unbounded\n" + body);
    RunOptions o;
    o.fuel = 500;
    auto rl = run(lin, W("a a"), o);
    // walks to cell n, extends it, then the move to n+1 is blocked
    CHECK(rl.kind == RunOutcome::Kind::Reject);
    CHECK(rl.steps == 3);
    CHECK(run(unb, W("a a"), o).kind == RunOutcome::Kind::FuelExhausted);
  }

  TEST_CASE("extension writes an undefined cell") {
    auto a = parse_automaton(R"(automaton ext
storage tape
tape-bound unbounded
states q0 q1
initial q0
accepting q1
alphabet a
tape-alphabet a b
epsilon: in q0 rule a -> a+ goto q0
epsilon: in q0 rule _ -> b goto q1
)");
    auto r = run(a, W("a a"));
    REQUIRE(r.accepted());
    REQUIRE(r.final_id);
    CHECK(r.final_id->tape.cells == std::vector<int>{0, 0, 1});
  }
}
