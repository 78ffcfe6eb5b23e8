#include <benchmark/benchmark.h>

#include <string>

#include "forge/automata/run.hpp"
#include "forge/grammar/cfg.hpp"
#include "forge/toolchain/dsl.hpp"
#include "forge/toolchain/fixtures.hpp"
#include "forge/transforms/transforms.hpp"
#include "forge/types/check.hpp"

namespace {

forge::TypeProgram program(const char* name) { return std::get<forge::TypeProgram>(forge::load_fixture(name)); }
forge::AutomatonSpec automaton(const char* name) { return std::get<forge::AutomatonSpec>(forge::load_fixture(name)); }

forge::Word anbncn(std::size_t n) {
  forge::Word w;
  for (const char* l : {"a", "b", "c"}) w.insert(w.end(), n, l);
  return w;
}

void BM_TypecheckDeep(benchmark::State& st) {
  auto p = program("anbncn-deep");
  auto w = anbncn(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(forge::check_word(p, w));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_TypecheckDeep)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_TypecheckNonLinearBlowup(benchmark::State& st) {
  auto p = program("s2-blowup");
  for (auto _ : st) benchmark::DoNotOptimize(forge::typecheck(p, p.expressions.front()));
}
BENCHMARK(BM_TypecheckNonLinearBlowup);

void BM_RunTreeAutomaton(benchmark::State& st) {
  auto ta = automaton("anbncn-ta");
  auto w = anbncn(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(forge::run_framed(ta, w));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_RunTreeAutomaton)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_RunTuringMachine(benchmark::State& st) {
  auto tm = automaton("tm-anbn");
  forge::Word w(static_cast<std::size_t>(st.range(0)), "a");
  w.insert(w.end(), static_cast<std::size_t>(st.range(0)), "b");
  for (auto _ : st) benchmark::DoNotOptimize(forge::run(tm, w));
}
BENCHMARK(BM_RunTuringMachine)->RangeMultiplier(4)->Range(4, 64);

void BM_FluentToDpda(benchmark::State& st) {
  auto p = program("unary-counter");
  for (auto _ : st) benchmark::DoNotOptimize(forge::fluent_to_dpda(p));
}
BENCHMARK(BM_FluentToDpda);

void BM_PolyadicToDyadic(benchmark::State& st) {
  auto ta = automaton("anbncn-ta3");
  for (auto _ : st) benchmark::DoNotOptimize(forge::polyadic_to_dyadic(ta));
}
BENCHMARK(BM_PolyadicToDyadic);

void BM_Cyk(benchmark::State& st) {
  auto g = std::get<forge::Cfg>(forge::load_fixture("palindrome-cfg"));
  forge::Word w;
  for (int i = 0; i < st.range(0); ++i) w.push_back(i % 3 == 0 ? "a" : "b");
  w.insert(w.end(), w.rbegin(), w.rend());
  for (auto _ : st) benchmark::DoNotOptimize(forge::cyk_membership(g, w));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Cyk)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void BM_GreibachProgramCheck(benchmark::State& st) {
  auto p = forge::gnf_to_program(forge::to_gnf(std::get<forge::Cfg>(forge::load_fixture("palindrome-cfg"))));
  forge::Word w;
  for (int i = 0; i < st.range(0); ++i) w.push_back(i % 3 == 0 ? "a" : "b");
  w.insert(w.end(), w.rbegin(), w.rend());
  for (auto _ : st) benchmark::DoNotOptimize(forge::check_word(p, w));
}
BENCHMARK(BM_GreibachProgramCheck)->RangeMultiplier(2)->Range(2, 8);

}  // namespace

BENCHMARK_MAIN();
