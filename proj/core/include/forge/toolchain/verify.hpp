#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "forge/automata/run.hpp"
#include "forge/toolchain/dsl.hpp"
#include "forge/transforms/transforms.hpp"
#include "forge/types/check.hpp"

namespace forge {

enum class Verdict { Accept, Reject, FuelExhausted };
const char* to_string(Verdict v);

struct MembershipOptions {
  std::size_t fuel = kDefaultFuel;
  std::optional<OverloadMode> mode;  // programs only; defaults to the declared mode
  // When false, an ambiguous eventually-one-type result whose set contains the
  // unit still counts as membership (grammar conversions may add ambiguity).
  bool assume_unambiguous = false;
};

// Program: typecheck of the word's expression; automaton: framed run;
// grammar: CYK.
Verdict membership(const Source& s, const Word& w, const MembershipOptions& opts = {});

// Letters a word may use (framing letters excluded).
std::vector<std::string> word_alphabet(const Source& s);
std::string display_name(const Source& s);

struct WordVerdict {
  Word word;
  Verdict left = Verdict::Reject;
  Verdict right = Verdict::Reject;
};

struct VerifyOptions {
  std::size_t max_len = 8;
  std::size_t fuel = kDefaultFuel;
  bool keep_table = false;  // record agreeing words too
  bool assume_unambiguous = false;
};

struct VerifyReport {
  std::string left;
  std::string right;
  std::size_t max_len = 0;
  std::size_t words = 0;
  std::size_t agreements = 0;
  std::size_t accepted = 0;  // words both sides accept
  std::vector<WordVerdict> table;
  std::vector<WordVerdict> mismatches;
  std::vector<WordVerdict> fuel_exhausted;

  bool ok() const { return mismatches.empty(); }
};

// Throws AlphabetMismatch when the two word alphabets differ.
VerifyReport verify_bisimulation(const Source& left, const Source& right, const VerifyOptions& opts = {});

std::string to_json(const VerifyReport& r);
std::string to_json(const ConversionReport& r);
std::string to_json(const AutomatonSpec& spec, const RunOutcome& r, const Word& w);
std::string to_json(const TypeProgram& p, const CheckResult& r, const std::string& expression);

}  // namespace forge
