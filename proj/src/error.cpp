#include "empirica/error.hpp"

namespace empirica {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kEmptySample: return "EMPTY_SAMPLE";
    case ErrorCode::kNonConverged: return "NON_CONVERGED";
    case ErrorCode::kCaseUndefined: return "CASE_UNDEFINED";
    case ErrorCode::kFactorizationFailure: return "FACTORIZATION_FAILURE";
    case ErrorCode::kNumericHealth: return "NUMERIC_HEALTH";
    case ErrorCode::kHorizonHit: return "HORIZON_HIT";
    case ErrorCode::kEmptyRun: return "EMPTY_RUN";
    case ErrorCode::kConfig: return "CONFIG";
    case ErrorCode::kIo: return "IO";
  }
  return "UNKNOWN";
}

}  // namespace empirica
