#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kerrlab {

enum class ErrorKind {
  OutOfChart,
  FamilyMismatch,
  EmptyGrid,
  DegenerateDirection,
  StepUnderflow,
  NoExteriorRoots,
  NoTrappedOrbit,
  InvalidSpec,
  CflViolation,
  NonFiniteField,
  ProfileUndefined,
  GridMismatch,
  WindowOutsideGrid,
  ParseError,
  ConstraintViolation,
  IoError,
  AuditFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure in the library is reported through this one type; callers
// branch on kind() rather than on a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kerrlab
