#include "cavisteady/errors.hpp"

namespace cavisteady {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNonPositiveGamma0: return "NonPositiveGamma0";
    case ErrorCode::kBadTruncation: return "BadTruncation";
    case ErrorCode::kBadN: return "BadN";
    case ErrorCode::kNonFiniteRate: return "NonFiniteRate";
    case ErrorCode::kDimensionOverflow: return "DimensionOverflow";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kUnsupportedN: return "UnsupportedN";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kExponentExceedsCutoff: return "ExponentExceedsCutoff";
    case ErrorCode::kPopulationTooSmall: return "PopulationTooSmall";
    case ErrorCode::kMissingMoment: return "MissingMoment";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace cavisteady
