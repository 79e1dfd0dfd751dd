#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cavisteady {

enum class ErrorCode {
  kNonPositiveGamma0,
  kBadTruncation,
  kBadN,
  kNonFiniteRate,
  kDimensionOverflow,
  kSingularSystem,
  kUnsupportedN,
  kCapExceeded,
  kExponentExceedsCutoff,
  kPopulationTooSmall,
  kMissingMoment,
  kInvalidConfig,
  kIoFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cavisteady
