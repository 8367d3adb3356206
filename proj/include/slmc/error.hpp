#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slmc {

enum class ErrorCode {
  kZeroUncertainty,
  kOutOfRange,
  kDegeneratePrior,
  kPriorMismatch,
  kDegenerateMean,
  kInfeasibleMoments,
  kNonPositiveVariance,
  kDomain,
  kLengthMismatch,
  kDegenerateSample,
  kDegenerateVariance,
  kInvalidConfig,
  kEmptyInput,
  kRedrawLimit,
  kIo,
};

/// Stable machine-readable name, used in CLI error lines.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace slmc
