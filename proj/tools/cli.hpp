#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "forge/toolchain/dsl.hpp"

namespace forge::cli {

enum ExitCode : int { kSuccess = 0, kNegative = 1, kUsage = 2, kInconclusive = 3 };

// `fixtures:NAME`, `convert(REF)`, `-` for stdin, or a DSL/JSON file path.
Source load_source(std::string_view ref);

// The conversion `convert(REF)` stands for: fluent_to_dpda for Fluent
// programs, rudimentary_to_ta for other programs, ta_to_dpda (falling back to
// polyadic_to_dyadic) for tree automata, and the GNF program for grammars.
Source default_conversion(const Source& s);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace forge::cli
