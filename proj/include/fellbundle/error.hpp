#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fell {

enum class Errc {
  InvalidParameter,
  NonAssociativeTable,
  MissingIdentity,
  NotAPermutationRow,
  NotASubgroup,
  NotNormal,
  DimensionMismatch,
  NonFiniteEntry,
  NotAnAlgebra,
  NotUnital,
  GroupMismatch,
  InvalidAction,
  InvalidTwist,
  NonUnitalUnitFiber,
  InvalidMultiplierFamily,
  DegenerateFunctional,
  ShapeMismatch,
  AxiomViolation,
  NotInAlgebra,
  NotAHomomorphism,
  ProjectionsNotResolving,
  FiberMismatch,
  MultiplierNotOrderCompatible,
  FiberNotPrincipal,
  TrivialN,
  ValueOutsideUnitFiber,
  GNormExceeded,
  ParseError,
  ValidationError,
  UnknownCommand,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fell
