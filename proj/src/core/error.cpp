#include "kerrlab/error.hpp"

namespace kerrlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::OutOfChart: return "OutOfChart";
    case ErrorKind::FamilyMismatch: return "FamilyMismatch";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::NoExteriorRoots: return "NoExteriorRoots";
    case ErrorKind::NoTrappedOrbit: return "NoTrappedOrbit";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::CflViolation: return "CFLViolation";
    case ErrorKind::NonFiniteField: return "NonFiniteField";
    case ErrorKind::ProfileUndefined: return "ProfileUndefined";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::WindowOutsideGrid: return "WindowOutsideGrid";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::AuditFailure: return "AuditFailure";
  }
  return "Unknown";
}

}  // namespace kerrlab
