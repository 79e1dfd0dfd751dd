#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavisteady/correlator.hpp"
#include "cavisteady/eom.hpp"
#include "cavisteady/params.hpp"

namespace cavisteady {

enum class Method { kExact, kPert0, kPert1, kPert2, kOracle };

std::string_view to_string(Method method) noexcept;
/// Parses "exact", "pert0", "pert1", "pert2" or "oracle".
std::optional<Method> parse_method(std::string_view name) noexcept;

/// Stationary values of a set of canonical correlators.
class SolutionVector {
 public:
  SolutionVector(SystemParams params, Method method, std::vector<CorrelatorIndex> rows,
                 Eigen::VectorXcd values, double residual);

  /// Value of any (not necessarily canonical) index; the identity is 1.
  [[nodiscard]] std::optional<Complex> value(const CorrelatorIndex& idx) const;
  /// Same as value() but throws Error(kMissingMoment).
  [[nodiscard]] Complex at(const CorrelatorIndex& idx) const;
  /// Single-cavity moment <a^{dagger m} a^{n}>.
  [[nodiscard]] std::optional<Complex> single(PairIndex pair) const;

  [[nodiscard]] const SystemParams& params() const noexcept { return params_; }
  [[nodiscard]] Method method() const noexcept { return method_; }
  [[nodiscard]] const std::vector<CorrelatorIndex>& rows() const noexcept { return rows_; }
  [[nodiscard]] const Eigen::VectorXcd& values() const noexcept { return values_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  SystemParams params_;
  Method method_;
  std::vector<CorrelatorIndex> rows_;
  Eigen::VectorXcd values_;
  double residual_;
  std::vector<std::string> warnings_;
  std::unordered_map<CorrelatorIndex, Eigen::Index, CorrelatorHash> index_;
};

/// Sparse LU with partial pivoting that also reports pivot magnitudes, so
/// that numerically singular systems are rejected instead of silently solved.
class SparseLu {
 public:
  using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

  /// Throws Error(kSingularSystem) when a pivot is below
  /// relative_pivot_tolerance * max|A_ij|.
  explicit SparseLu(const SparseMatrix& a, double relative_pivot_tolerance = 1e-12);
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;
  ~SparseLu();

  [[nodiscard]] Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  [[nodiscard]] Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const;

  [[nodiscard]] double min_pivot() const noexcept { return min_pivot_; }
  [[nodiscard]] double max_pivot() const noexcept { return max_pivot_; }
  [[nodiscard]] double matrix_max_norm() const noexcept { return max_norm_; }
  /// max|u_jj| / min|u_jj|; a cheap lower bound on the condition number.
  [[nodiscard]] double condition_estimate() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double min_pivot_ = 0.0;
  double max_pivot_ = 0.0;
  double max_norm_ = 0.0;
};

struct SolveOptions {
  double relative_pivot_tolerance = 1e-12;
  double ill_conditioned_threshold = 1e12;
};

/// v = -M^{-1} I. Throws Error(kSingularSystem) for a non-unique steady state.
SolutionVector solve_steady(const ReducedSystem& system, const SolveOptions& options = {});

/// max_r |(M v + I)_r|.
double residual_norm(const ReducedSystem& system, const Eigen::VectorXcd& v);
/// Residual of a solution laid out on the same rows as system; missing rows read as zero.
double residual_norm(const ReducedSystem& system, const SolutionVector& v);

}  // namespace cavisteady
