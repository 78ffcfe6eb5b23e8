#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "forge/term/store.hpp"
#include "forge/term/term.hpp"
#include "forge/word.hpp"

namespace forge {

enum class StateId : std::uint32_t {};
inline std::size_t index(StateId s) { return static_cast<std::size_t>(s); }

enum class StorageKind { None, Pushdown, Tree, Tape };

// Linear: head may not pass the input length. Unbounded: one-way infinite,
// hangs left of cell 0. TwoWay: infinite in both directions.
enum class TapeBound { Linear, Unbounded, TwoWay };

// gamma -> gamma'+ / gamma -> gamma'- / _ -> gamma (extension of an undefined cell).
struct TapeRule {
  enum class Move { Right, Left, Extend };
  Move move = Move::Right;
  int read = -1;  // tape symbol index; -1 reads an undefined cell
  int write = 0;

  friend bool operator==(const TapeRule&, const TapeRule&) = default;
};

using StorageRewrite = std::variant<std::monostate, RewriteRule, MultiRewriteRule, TapeRule>;

struct ConsumingItem {
  std::uint32_t letter = 0;         // index into AutomatonSpec::alphabet
  StateId from{};                   // word mode
  std::vector<StateId> children;    // forest mode: one state per child
  StorageRewrite rewrite;
  StateId to{};
};

struct EpsilonItem {
  StateId from{};
  StorageRewrite rewrite;
  StateId to{};
};

enum class StatesFeature { Stateless, Stateful };
enum class StorageFeature { NoStore, Pushdown, Tree, LinearTape, UnboundedTape };
enum class RecognizerFeature { Word, Forest };
enum class EpsilonFeature { RealTime, Epsilon };
enum class DeterminismFeature { Deterministic, NonDeterministic };
enum class MultiplicityFeature { Linear, NonLinear };
enum class DepthFeature { Shallow, Deep };

// One value per characteristic of the automata lattice, ordered so that a
// larger enumerator is the more permissive feature.
struct LatticePointA {
  StatesFeature states = StatesFeature::Stateless;
  StorageFeature storage = StorageFeature::NoStore;
  RecognizerFeature recognizer = RecognizerFeature::Word;
  EpsilonFeature epsilon = EpsilonFeature::RealTime;
  DeterminismFeature determinism = DeterminismFeature::Deterministic;
  MultiplicityFeature multiplicity = MultiplicityFeature::Linear;
  DepthFeature depth = DepthFeature::Shallow;

  friend bool operator==(const LatticePointA&, const LatticePointA&) = default;
};

bool dominates(const LatticePointA& upper, const LatticePointA& lower);
std::string to_string(const LatticePointA& p);

struct AutomatonSpec {
  std::string name;
  std::shared_ptr<TermStore> store = std::make_shared<TermStore>();

  StorageKind storage = StorageKind::None;
  TapeBound tape_bound = TapeBound::Unbounded;
  // Input is written to the tape before the run (the usual Turing convention).
  bool tape_preload = true;
  std::vector<std::string> tape_alphabet;
  std::optional<int> blank;  // undefined cells read as this symbol when set

  std::vector<std::string> states;
  StateId initial{};
  std::vector<bool> accepting;

  std::vector<std::string> alphabet;
  std::vector<unsigned> letter_ranks;  // forest mode only
  bool forest = false;

  // Declaration order of the store's symbols, with "eps" marking the unit.
  std::vector<std::string> storage_order;

  std::vector<ConsumingItem> delta;
  std::vector<EpsilonItem> epsilon;

  Term initial_tree{};
  std::vector<int> initial_tape;

  Framing framing;
  std::optional<LatticePointA> declared;
  bool deterministic_at_end = false;  // stored only

  std::optional<StateId> find_state(std::string_view name) const;
  StateId add_state(std::string name, bool accept = false);
  std::optional<std::uint32_t> find_letter(std::string_view name) const;
  std::uint32_t add_letter(std::string name, unsigned rank = 0);
  std::optional<int> find_tape_symbol(std::string_view name) const;
  bool is_accepting(StateId s) const { return accepting.at(index(s)); }
  // Alphabet letters that are not framing letters.
  std::vector<std::string> word_alphabet() const;
};

struct Diagnostic {
  std::string feature;
  std::string message;
};

struct ValidationReport {
  LatticePointA point;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

// Computes the least lattice point and checks structural well-formedness.
ValidationReport validate(const AutomatonSpec& spec);

}  // namespace forge
