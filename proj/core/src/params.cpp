#include "cavisteady/params.hpp"

#include <cmath>
#include <string>

#include "cavisteady/errors.hpp"

namespace cavisteady {

SystemParams validate_params(const ParamRecord& raw) {
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(raw.delta) || !finite(raw.u) || !finite(raw.j) || !finite(raw.omega) ||
      !finite(raw.gamma0) || !finite(raw.n_thermal)) {
    throw Error(ErrorCode::kNonFiniteRate, "all rates must be finite");
  }
  if (raw.gamma0 <= 0.0) {
    throw Error(ErrorCode::kNonPositiveGamma0,
                "gamma0 must be positive, got " + std::to_string(raw.gamma0));
  }
  if (raw.n_thermal < 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "n_thermal must be non-negative");
  }
  if (raw.n_max < 1) {
    throw Error(ErrorCode::kBadTruncation, "n_max must be >= 1, got " + std::to_string(raw.n_max));
  }
  if (raw.n_cavities < 1) {
    throw Error(ErrorCode::kBadN, "N must be >= 1, got " + std::to_string(raw.n_cavities));
  }
  return SystemParams(raw);
}

}  // namespace cavisteady
