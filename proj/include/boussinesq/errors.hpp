#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace boussinesq {

enum class ErrorKind {
  InvalidParams,
  IntegrationWindowExceeded,
  SingularTransform,
  GridOutsideDomain,
  ConstraintClassMismatch,
  DegenerateStretch,
  Degenerate,
  InvalidStratification,
  SingularWindow,
  InvalidClock,
  LostRegularity,
  ComplexBranch,
  QuadratureBreakdown,
  NonFiniteIntegrand,
  NotLinearMap,
  EmptyCurve,
};

std::string_view to_string(ErrorKind kind);

/// All recoverable failures of the library carry a kind so callers
/// (notably the CLI exit-code contract) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace boussinesq
