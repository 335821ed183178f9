#pragma once

#include <stdexcept>
#include <string>

namespace genus {

enum class ErrorKind {
  DisconnectedGraph,
  MalformedRotation,
  MalformedInput,
  UnsupportedParams,
  SingularSystem,
  RankMismatch,
  CapExceeded,
  NotACirculation,
  TraceTooShort,
  DimensionMismatch,
  NotSeparable,
  CheckFailed,
};

const char* to_string(ErrorKind kind);

/// Library error. `kind` identifies the failure class for callers that
/// need to branch (the CLI maps CheckFailed to exit code 2).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A verifier rejected its input. `witness` is a JSON document that
/// identifies the offending edge, component or time step.
class CheckFailed : public Error {
 public:
  CheckFailed(const std::string& message, std::string witness)
      : Error(ErrorKind::CheckFailed, message), witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace genus
