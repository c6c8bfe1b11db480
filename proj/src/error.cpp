#include "ltg/error.hpp"

namespace ltg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::FellerViolation: return "FellerViolation";
    case ErrorKind::BadDensity: return "BadDensity";
    case ErrorKind::PoleAtB: return "PoleAtB";
    case ErrorKind::DomainExceeded: return "DomainExceeded";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorKind::StepSizeTooLarge: return "StepSizeTooLarge";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::NonFinitePath: return "NonFinitePath";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::DuplicateKey: return "DuplicateKey";
    case ErrorKind::DuplicateUtility: return "DuplicateUtility";
    case ErrorKind::Usage: return "Usage";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string join(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(v.kind)) + ": " + v.message;
  }
  return out;
}

std::vector<Violation> non_empty(std::vector<Violation> v) {
  if (v.empty()) v.push_back({ErrorKind::InternalInvariantViolation, "empty violation list"});
  return v;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message)
    : Error(std::vector<Violation>{{kind, std::move(message)}}) {}

Error::Error(std::vector<Violation> violations)
    : std::runtime_error(join(non_empty(violations))), violations_(non_empty(std::move(violations))) {}

}  // namespace ltg
