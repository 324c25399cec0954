#include "phimod/error.hpp"

namespace phimod {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::IncompatibleTower: return "IncompatibleTower";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::InfiniteConstantTerm: return "InfiniteConstantTerm";
    case ErrorKind::NotDominant: return "NotDominant";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonDominantResult: return "NonDominantResult";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotStable: return "NotStable";
    case ErrorKind::NotIntertwining: return "NotIntertwining";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::NotMorphism: return "NotMorphism";
    case ErrorKind::ZeroSubspace: return "ZeroSubspace";
    case ErrorKind::UnsupportedFrobenius: return "UnsupportedFrobenius";
    case ErrorKind::MalformedPoint: return "MalformedPoint";
    case ErrorKind::SeedBudgetExhausted: return "SeedBudgetExhausted";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace phimod
