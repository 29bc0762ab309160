#include "causalstruct/error.hpp"

namespace causalstruct {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownRelation: return "UnknownRelation";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::OracleUnavailable: return "OracleUnavailable";
    case ErrorKind::MalformedResponse: return "MalformedResponse";
    case ErrorKind::CompletionFailed: return "CompletionFailed";
    case ErrorKind::MissingIntervention: return "MissingIntervention";
    case ErrorKind::DoesNotFit: return "DoesNotFit";
    case ErrorKind::Unresolvable: return "Unresolvable";
    case ErrorKind::RenderFailed: return "RenderFailed";
    case ErrorKind::GrammarError: return "GrammarError";
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Error";
}

}  // namespace causalstruct
