#include "floc/error.hpp"

namespace floc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroNormRow: return "ZeroNormRow";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kAlreadySelected: return "AlreadySelected";
    case ErrorCode::kEmptyGroundSet: return "EmptyGroundSet";
    case ErrorCode::kNonIntegralFrames: return "NonIntegralFrames";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kSubsetTooSmall: return "SubsetTooSmall";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace floc
