#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmr {

enum class ErrorCode {
  InvalidArgument,
  NonShiftInvariant,
  EmptyTruncation,
  NearZeroSum,
  ShapeMismatch,
  UnitCircleRoot,
  NoConvergence,
  SpreadExceeded,
  CutLocus,
  BeyondInjectivity,
};

/// True for failures of the numerics (as opposed to bad input).
constexpr bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnitCircleRoot:
    case ErrorCode::NoConvergence:
    case ErrorCode::SpreadExceeded:
    case ErrorCode::CutLocus:
    case ErrorCode::BeyondInjectivity:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Same error with `context` prepended to the message.
  Error with_context(const std::string& context) const {
    return Error(code_, context + ": " + what());
  }

 private:
  ErrorCode code_;
};

}  // namespace mmr
