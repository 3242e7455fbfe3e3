#include "spinframe/error.hpp"

namespace spinframe {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Arity: return "ArityMismatch";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::ChartDomain: return "ChartDomainViolation";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::ImmersionDegenerate: return "ImmersionDegenerate";
    case ErrorKind::Stencil: return "StencilViolation";
    case ErrorKind::SpinorVanishes: return "SpinorVanishes";
    case ErrorKind::HalfSpinorVanishes: return "HalfSpinorVanishes";
    case ErrorKind::CompatGateFailed: return "CompatGateFailed";
    case ErrorKind::StepUnstable: return "StepUnstable";
    case ErrorKind::ChartExit: return "ChartExit";
    case ErrorKind::FrameDrift: return "FrameDrift";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::Input: return "InputError";
  }
  return "Error";
}

}  // namespace spinframe
