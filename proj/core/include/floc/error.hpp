#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace floc {

enum class ErrorCode {
  kZeroNormRow,
  kNonFiniteValue,
  kIndexOutOfRange,
  kDuplicateIndex,
  kAlreadySelected,
  kEmptyGroundSet,
  kNonIntegralFrames,
  kInvalidConfig,
  kEmptySubset,
  kSubsetTooSmall,
  kInstanceTooLarge,
  kInvalidSpec,
  kMalformedFile,
  kIoError,
};

// Stable name of an error code, e.g. "ZeroNormRow".
std::string_view to_string(ErrorCode code);

// All library failures are reported as floc::Error. The message names the
// violated invariant; code() lets callers (the CLI) map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // The message without the "Code: " prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace floc
