#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cerashape {

enum class ErrorCode {
  NonPositiveThickness,
  DegenerateCell,
  DegenerateElement,
  DegenerateFacet,
  OutOfDomain,
  RankDeficient,
  SolveFailure,
  NonIntegerM,
  AllRatiosUndefined,
  StepFailure,
  ParseError,
  ValidationError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type thrown by every module. The code identifies the failure
/// class so callers (line searches, the sweep driver) can react to it
/// without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cerashape
