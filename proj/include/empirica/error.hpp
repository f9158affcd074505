#pragma once

#include <stdexcept>
#include <string>

namespace empirica {

enum class ErrorCode {
  kInvalidArgument = 1,
  kEmptySample,
  kNonConverged,
  kCaseUndefined,
  kFactorizationFailure,
  kNumericHealth,
  kHorizonHit,
  kEmptyRun,
  kConfig,
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code survives the C boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace empirica
