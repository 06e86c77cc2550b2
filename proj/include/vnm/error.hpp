#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vnm {

enum class ErrorCode {
  InvalidArgument,
  InvalidState,
  GridTooNarrow,
  ShapeMismatch,
  DimensionMismatch,
  KernelMismatch,
  NonHermitianObservable,
  BasisMismatch,
  NegligibleProbability,
  InsufficientSamples,
  UnsupportedObservable,
  UnsupportedProbe,
  StepSizeTooLarge,
  ModeCutoffTooSmall,
  TruncationTooSmall,
  GridBudgetExceeded,
  ConfigInvalid,
  ToleranceExceeded,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace vnm
