#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stefan {

enum class ErrorCode {
  InvalidInput,
  OutOfRange,
  OutOfDomain,
  MaxSubdivisionsExceeded,
  BracketExpansionFailed,
  NotBracketed,
  NonConvergence,
  FrontCollapse,
  MismatchedProblem,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::MaxSubdivisionsExceeded: return "MaxSubdivisionsExceeded";
    case ErrorCode::BracketExpansionFailed: return "BracketExpansionFailed";
    case ErrorCode::NotBracketed: return "NotBracketed";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::FrontCollapse: return "FrontCollapse";
    case ErrorCode::MismatchedProblem: return "MismatchedProblem";
  }
  return "Unknown";
}

}  // namespace stefan
