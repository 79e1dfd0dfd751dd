#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavisteady/params.hpp"
#include "cavisteady/steady_solver.hpp"

namespace cavisteady {

enum class ScanParameter { kJ, kDelta, kLaserOffset, kOmega, kNThermal };

std::string_view to_string(ScanParameter p) noexcept;

struct ScanRange {
  ScanParameter parameter = ScanParameter::kJ;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
};

/// Parses `name:from:to:steps`. Throws Error(kInvalidConfig).
ScanRange parse_scan_range(std::string_view text);

/// Evenly spaced values, endpoints included; a single step yields `from`.
std::vector<double> scan_points(const ScanRange& range);

enum class OutputFormat { kCsv, kJson };

struct ObservableSelection {
  bool n_a = true;
  bool g2 = true;
  bool nn = true;
};

/// Parses a comma separated list of n_a, g2, nn.
ObservableSelection parse_observables(std::string_view text);

/// How each method is evaluated.
struct MethodOptions {
  /// Fock cutoff of the oracle; negative means n_max.
  int oracle_cut = -1;
  long oracle_max_dimension = 256;
  /// Exact solve over every canonical correlator rather than the closure
  /// of the observables.
  bool full_system = false;
};

struct ScanConfig {
  ParamRecord base;
  std::optional<ScanRange> scan;
  std::vector<Method> methods{Method::kExact};
  ObservableSelection observables;
  MethodOptions method_options;
  std::string out_path;  // empty: standard output
  OutputFormat format = OutputFormat::kCsv;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Throws Error(kInvalidConfig) (or the validate_params errors).
void validate_config(const ScanConfig& config);

/// Builds a config from a JSON object whose keys mirror the CLI flags.
ScanConfig config_from_json(std::string_view text);

/// Solves one parameter point with one method.
SolutionVector solve_method(const SystemParams& params, Method method, const MethodOptions& options = {});

struct ResultRow {
  std::string param_name;
  double param_value = 0.0;
  Method method = Method::kExact;
  std::optional<double> n_a;
  std::optional<double> g2;
  std::optional<std::complex<double>> nn;
  std::optional<double> residual;
  std::string error;
};

/// One row per (parameter value, method), parameter-major. Per-point solver
/// failures land in ResultRow::error and the scan continues.
std::vector<ResultRow> run_scan(const ScanConfig& config);

void write_csv(const std::vector<ResultRow>& rows, const ScanConfig& config, std::ostream& out);
void write_json(const std::vector<ResultRow>& rows, const ScanConfig& config, std::ostream& out);

/// Writes to config.out_path (or `fallback` when empty) in config.format.
/// Throws Error(kIoFailure).
void write_results(const std::vector<ResultRow>& rows, const ScanConfig& config, std::ostream& fallback);

}  // namespace cavisteady
