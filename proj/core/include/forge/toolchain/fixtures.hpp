#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/toolchain/dsl.hpp"

namespace forge {

enum class FixtureKind { Program, Automaton, Grammar };

struct Fixture {
  std::string name;
  FixtureKind kind;
  std::string description;
  std::string source;  // DSL text
  // Lattice point the construction is usually filed under; nullopt when none.
  std::optional<std::string> claimed_point;
};

const std::vector<Fixture>& fixtures();
const Fixture* find_fixture(std::string_view name);
// Throws forge::Error for unknown names.
Source load_fixture(std::string_view name);

const char* to_string(FixtureKind k);

}  // namespace forge
