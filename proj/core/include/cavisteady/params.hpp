#pragma once

namespace cavisteady {

/// Which diagonal decay coefficient the moment generator uses.
///
/// kCorrected keeps the +P(m+n)/2 contribution of the incoherent pump, so the
/// diagonal reads -(gamma - P)(m+n)/2. kAppendixVerbatim drops it and
/// reproduces the commonly printed -gamma(m+n)/2 table.
enum class PumpDiagonal { kCorrected, kAppendixVerbatim };

/// Unvalidated parameter record. Rates are in units of gamma0.
struct ParamRecord {
  double delta = 0.0;
  double u = 0.0;
  double j = 0.0;
  double omega = 0.0;
  double gamma0 = 1.0;
  double n_thermal = 0.0;
  int n_cavities = 1;
  int n_max = 2;
  PumpDiagonal pump_diagonal = PumpDiagonal::kCorrected;
};

/// Validated ring parameters. Only constructible through validate_params().
class SystemParams {
 public:
  [[nodiscard]] double delta() const noexcept { return raw_.delta; }
  [[nodiscard]] double u() const noexcept { return raw_.u; }
  [[nodiscard]] double j() const noexcept { return raw_.j; }
  [[nodiscard]] double omega() const noexcept { return raw_.omega; }
  [[nodiscard]] double gamma0() const noexcept { return raw_.gamma0; }
  [[nodiscard]] double n_thermal() const noexcept { return raw_.n_thermal; }
  [[nodiscard]] int n_cavities() const noexcept { return raw_.n_cavities; }
  [[nodiscard]] int n_max() const noexcept { return raw_.n_max; }
  [[nodiscard]] PumpDiagonal pump_diagonal() const noexcept { return raw_.pump_diagonal; }

  /// Total decay rate (1 + n_T) gamma0.
  [[nodiscard]] double gamma() const noexcept { return (1.0 + raw_.n_thermal) * raw_.gamma0; }
  /// Incoherent pump rate n_T gamma0.
  [[nodiscard]] double pump() const noexcept { return raw_.n_thermal * raw_.gamma0; }

  [[nodiscard]] const ParamRecord& record() const noexcept { return raw_; }

 private:
  friend SystemParams validate_params(const ParamRecord& raw);
  explicit SystemParams(const ParamRecord& raw) : raw_(raw) {}

  ParamRecord raw_;
};

/// Throws Error with kNonPositiveGamma0, kBadTruncation, kBadN or kNonFiniteRate.
SystemParams validate_params(const ParamRecord& raw);

}  // namespace cavisteady
