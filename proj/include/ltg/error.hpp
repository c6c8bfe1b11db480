#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltg {

enum class ErrorKind {
  OutOfRange,
  FellerViolation,
  BadDensity,
  PoleAtB,
  DomainExceeded,
  QuadratureFailure,
  InternalInvariantViolation,
  StepSizeTooLarge,
  DegenerateVariance,
  NonFinitePath,
  UnknownKey,
  MissingKey,
  TypeMismatch,
  DuplicateKey,
  DuplicateUtility,
  Usage,
  Io,
};

std::string_view to_string(ErrorKind kind);

struct Violation {
  ErrorKind kind;
  std::string message;
};

/// Library-wide exception. Validation failures carry every violated invariant,
/// not just the first one encountered.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message);
  explicit Error(std::vector<Violation> violations);

  ErrorKind kind() const noexcept { return violations_.front().kind; }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace ltg
