#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phimod {

enum class ErrorKind {
  DivisionByZero,
  DimensionMismatch,
  SingularMatrix,
  IncompatibleTower,
  InvalidField,
  InfiniteConstantTerm,
  NotDominant,
  IndexOutOfRange,
  NonDominantResult,
  PreconditionViolated,
  NotStable,
  NotIntertwining,
  NotNested,
  NotMorphism,
  ZeroSubspace,
  UnsupportedFrobenius,
  MalformedPoint,
  SeedBudgetExhausted,
  ParseError,
  ValidationError,
};

std::string_view error_name(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace phimod
