#include "boussinesq/errors.hpp"

namespace boussinesq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::IntegrationWindowExceeded: return "IntegrationWindowExceeded";
    case ErrorKind::SingularTransform: return "SingularTransform";
    case ErrorKind::GridOutsideDomain: return "GridOutsideDomain";
    case ErrorKind::ConstraintClassMismatch: return "ConstraintClassMismatch";
    case ErrorKind::DegenerateStretch: return "DegenerateStretch";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::InvalidStratification: return "InvalidStratification";
    case ErrorKind::SingularWindow: return "SingularWindow";
    case ErrorKind::InvalidClock: return "InvalidClock";
    case ErrorKind::LostRegularity: return "LostRegularity";
    case ErrorKind::ComplexBranch: return "ComplexBranch";
    case ErrorKind::QuadratureBreakdown: return "QuadratureBreakdown";
    case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorKind::NotLinearMap: return "NotLinearMap";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
  }
  return "Unknown";
}

}  // namespace boussinesq
