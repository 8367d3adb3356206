#include "slmc/error.hpp"

namespace slmc {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kZeroUncertainty: return "zero_uncertainty";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kDegeneratePrior: return "degenerate_prior";
    case ErrorCode::kPriorMismatch: return "prior_mismatch";
    case ErrorCode::kDegenerateMean: return "degenerate_mean";
    case ErrorCode::kInfeasibleMoments: return "infeasible_moments";
    case ErrorCode::kNonPositiveVariance: return "non_positive_variance";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kLengthMismatch: return "length_mismatch";
    case ErrorCode::kDegenerateSample: return "degenerate_sample";
    case ErrorCode::kDegenerateVariance: return "degenerate_variance";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kRedrawLimit: return "redraw_limit";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace slmc
