#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causalstruct {

enum class ErrorKind {
  UnknownRelation,
  CycleDetected,
  DecodeError,
  InvalidGraph,
  PreconditionViolation,
  OracleUnavailable,
  MalformedResponse,
  CompletionFailed,
  MissingIntervention,
  DoesNotFit,
  Unresolvable,
  RenderFailed,
  GrammarError,
  UnknownObject,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace causalstruct
