#include "fellbundle/error.hpp"

namespace fell {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::NonAssociativeTable: return "NonAssociativeTable";
    case Errc::MissingIdentity: return "MissingIdentity";
    case Errc::NotAPermutationRow: return "NotAPermutationRow";
    case Errc::NotASubgroup: return "NotASubgroup";
    case Errc::NotNormal: return "NotNormal";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFiniteEntry: return "NonFiniteEntry";
    case Errc::NotAnAlgebra: return "NotAnAlgebra";
    case Errc::NotUnital: return "NotUnital";
    case Errc::GroupMismatch: return "GroupMismatch";
    case Errc::InvalidAction: return "InvalidAction";
    case Errc::InvalidTwist: return "InvalidTwist";
    case Errc::NonUnitalUnitFiber: return "NonUnitalUnitFiber";
    case Errc::InvalidMultiplierFamily: return "InvalidMultiplierFamily";
    case Errc::DegenerateFunctional: return "DegenerateFunctional";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::AxiomViolation: return "AxiomViolation";
    case Errc::NotInAlgebra: return "NotInAlgebra";
    case Errc::NotAHomomorphism: return "NotAHomomorphism";
    case Errc::ProjectionsNotResolving: return "ProjectionsNotResolving";
    case Errc::FiberMismatch: return "FiberMismatch";
    case Errc::MultiplierNotOrderCompatible: return "MultiplierNotOrderCompatible";
    case Errc::FiberNotPrincipal: return "FiberNotPrincipal";
    case Errc::TrivialN: return "TrivialN";
    case Errc::ValueOutsideUnitFiber: return "ValueOutsideUnitFiber";
    case Errc::GNormExceeded: return "GNormExceeded";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

}  // namespace fell
