#include "vnm/error.hpp"

namespace vnm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::KernelMismatch: return "KernelMismatch";
    case ErrorCode::NonHermitianObservable: return "NonHermitianObservable";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::NegligibleProbability: return "NegligibleProbability";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::UnsupportedObservable: return "UnsupportedObservable";
    case ErrorCode::UnsupportedProbe: return "UnsupportedProbe";
    case ErrorCode::StepSizeTooLarge: return "StepSizeTooLarge";
    case ErrorCode::ModeCutoffTooSmall: return "ModeCutoffTooSmall";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::GridBudgetExceeded: return "GridBudgetExceeded";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ToleranceExceeded: return "ToleranceExceeded";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace vnm
