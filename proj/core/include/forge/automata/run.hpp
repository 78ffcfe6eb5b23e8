#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/automata/automaton.hpp"

namespace forge {

inline constexpr std::size_t kDefaultFuel = 100000;
inline constexpr std::size_t kDefaultConfigCap = 10000;

// kDefaultFuel unless FORGE_FUEL holds a positive integer.
std::size_t default_fuel();

struct TapeContents {
  long head = 0;
  long origin = 0;         // tape position of cells[0]
  std::vector<int> cells;  // -1 marks an undefined cell

  int at(long pos) const;
  int read() const { return at(head); }
  void write(int symbol);
  void trim();
  friend bool operator==(const TapeContents&, const TapeContents&) = default;
};

struct InstantaneousDescription {
  std::size_t consumed = 0;
  StateId state{};
  Term tree{};
  TapeContents tape;
  friend bool operator==(const InstantaneousDescription&, const InstantaneousDescription&) = default;
};

struct RunOutcome {
  enum class Kind { Accept, Reject, FuelExhausted };
  enum class Reason { None, Hang, NonAcceptingState, ConfigCap };

  Kind kind = Kind::Reject;
  Reason reason = Reason::None;
  std::size_t steps = 0;
  std::optional<InstantaneousDescription> final_id;
  std::vector<InstantaneousDescription> trace;  // deterministic runs with tracing on

  bool accepted() const { return kind == Kind::Accept; }
};

std::string to_string(const RunOutcome& r);

struct RunOptions {
  std::size_t fuel = kDefaultFuel;
  std::size_t config_cap = kDefaultConfigCap;
  bool trace = false;
};

// Letter indices of w; unknown letters map to a sentinel no item consumes.
std::vector<std::uint32_t> encode_word(const AutomatonSpec& spec, const Word& w);

InstantaneousDescription initial_id(const AutomatonSpec& spec, std::span<const std::uint32_t> input);

std::vector<InstantaneousDescription> step(const AutomatonSpec& spec, const InstantaneousDescription& id,
                                           std::span<const std::uint32_t> input);
std::vector<InstantaneousDescription> epsilon_successors(const AutomatonSpec& spec,
                                                         const InstantaneousDescription& id,
                                                         std::span<const std::uint32_t> input);

RunOutcome run(const AutomatonSpec& spec, const Word& input, const RunOptions& opts = {});
// Runs on framing.prefix + w + framing.suffix.
RunOutcome run_framed(const AutomatonSpec& spec, const Word& w, const RunOptions& opts = {});

struct InputTree {
  std::string letter;
  std::vector<InputTree> children;
};

InputTree parse_input_tree(std::string_view text);
RunOutcome run_forest(const AutomatonSpec& spec, const InputTree& input, const RunOptions& opts = {});

struct EnumerationResult {
  std::vector<Word> accepted;
  std::vector<Word> fuel_exhausted;
};

// Words over the non-framing alphabet, framed before each run.
EnumerationResult enumerate_accepted(const AutomatonSpec& spec, std::size_t max_len, const RunOptions& opts = {});

}  // namespace forge
