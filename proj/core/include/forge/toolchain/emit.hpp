#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/types/program.hpp"

namespace forge {

enum class EmitTarget { Java, Cpp, Pseudo };

struct EmitOptions {
  EmitTarget target = EmitTarget::Pseudo;
  int indent = 2;
};

std::optional<EmitTarget> parse_target(std::string_view s);
const char* to_string(EmitTarget t);

// Identifier renaming applied to type and function names; injective.
std::map<std::string, std::string> mangling(const TypeProgram& p, EmitTarget t);

// Throws UnsupportedFeature when the target cannot express the program.
std::string emit(const TypeProgram& p, const EmitOptions& opts);

// Token stream of C-family source with comments and layout removed.
std::vector<std::string> normalize_source(std::string_view text);
bool same_source(std::string_view a, std::string_view b);

}  // namespace forge
