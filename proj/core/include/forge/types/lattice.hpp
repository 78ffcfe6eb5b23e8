#pragma once

#include <string>

#include "forge/types/program.hpp"

namespace forge {

enum class ArgArity { Nyladic, Monadic, Dyadic, Polyadic };
enum class PatternDepth { Shallow, AlmostShallow, Deep };
enum class PatternMultiplicity { Linear, NonLinear };
enum class FunctionArity { Unary, NAry };
enum class TypeofFeature { None, Rudimentary, Full };

struct LatticePointT {
  ArgArity c1 = ArgArity::Nyladic;
  PatternDepth c2 = PatternDepth::Shallow;
  PatternMultiplicity c3 = PatternMultiplicity::Linear;
  FunctionArity c4 = FunctionArity::Unary;
  TypeofFeature c5 = TypeofFeature::None;
  OverloadMode c6 = OverloadMode::OneType;

  friend bool operator==(const LatticePointT&, const LatticePointT&) = default;
};

bool dominates(const LatticePointT& upper, const LatticePointT& lower);
std::string to_string(const LatticePointT& p);

// The Fluent point: monadic, deep, rudimentary typeof (otherwise least).
LatticePointT fluent_point();
// Plain polyadic parametric polymorphism.
LatticePointT pp_point();

LatticePointT classify_program(const TypeProgram& p);

}  // namespace forge
