#include "mmr/error.hpp"

namespace mmr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::NonShiftInvariant: return "non-shift-invariant mask";
    case ErrorCode::EmptyTruncation: return "empty truncation";
    case ErrorCode::NearZeroSum: return "near-zero coefficient sum";
    case ErrorCode::ShapeMismatch: return "shape mismatch";
    case ErrorCode::UnitCircleRoot: return "symbol root on unit circle";
    case ErrorCode::NoConvergence: return "no convergence";
    case ErrorCode::SpreadExceeded: return "spread exceeds safe radius";
    case ErrorCode::CutLocus: return "log undefined at cut locus";
    case ErrorCode::BeyondInjectivity: return "beyond injectivity radius";
  }
  return "unknown error";
}

}  // namespace mmr
