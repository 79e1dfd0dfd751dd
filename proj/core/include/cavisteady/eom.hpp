#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "cavisteady/correlator.hpp"
#include "cavisteady/params.hpp"

namespace cavisteady {

using Complex = std::complex<double>;

/// Parameter a coupling term originates from. Kept through assembly so
/// that block extraction can split matrices exactly.
enum class Origin {
  kDetuning,
  kKerrDiagonal,
  kKerrRaise,
  kDecay,
  kPumpDiagonal,
  kPumpLower,
  kDrive,
  kHop,
};

std::string_view to_string(Origin origin) noexcept;

/// One term of d<idx>/dt: coefficient * <target>. Targets are raw (not
/// canonicalized); an all-zero target is the identity.
struct EomTerm {
  CorrelatorIndex target;
  Complex coefficient;
  Origin origin;
};

/// Undirected nearest-neighbour links of the N-ring. N = 2 has a single link.
std::vector<std::pair<int, int>> ring_links(int n_cavities);

/// Full list of equation-of-motion terms for d<idx>/dt under hierarchy
/// truncation at params.n_max(). Zero coefficients are omitted.
std::vector<EomTerm> derivative_terms(const CorrelatorIndex& idx, const SystemParams& params);

inline constexpr std::size_t kIdentityColumn = std::numeric_limits<std::size_t>::max();

/// Merged assembled coefficient, one per (row, col, origin). col ==
/// kIdentityColumn marks a contribution to the constant vector I.
struct TaggedEntry {
  std::size_t row;
  std::size_t col;
  Complex value;
  Origin origin;
};

struct AssemblyOptions {
  /// Cap on stored tagged nonzeros; DimensionOverflow above it.
  std::size_t max_nonzeros = 2'000'000;
  /// Empty: every canonical correlator is a row. Otherwise only the rows
  /// reachable from these seeds through the generator are assembled, which
  /// is an exactly closed subsystem.
  std::vector<CorrelatorIndex> seeds;
};

/// Matrix M and vector I over canonical correlators, d v/dt = M v + I.
class ReducedSystem {
 public:
  using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

  [[nodiscard]] std::size_t dimension() const noexcept { return rows_.size(); }
  [[nodiscard]] const std::vector<CorrelatorIndex>& rows() const noexcept { return rows_; }
  /// Row of a correlator (canonicalized first); nullopt when absent.
  [[nodiscard]] std::optional<std::size_t> row_of(const CorrelatorIndex& idx) const;
  [[nodiscard]] const SparseMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] const Eigen::VectorXcd& rhs() const noexcept { return rhs_; }
  [[nodiscard]] const std::vector<TaggedEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] const SystemParams& params() const noexcept { return params_; }

 private:
  friend ReducedSystem assemble_system(const SystemParams&, const AssemblyOptions&);
  explicit ReducedSystem(const SystemParams& params) : params_(params) {}

  SystemParams params_;
  std::vector<CorrelatorIndex> rows_;
  std::unordered_map<CorrelatorIndex, std::size_t, CorrelatorHash> index_;
  std::vector<TaggedEntry> entries_;
  SparseMatrix matrix_;
  Eigen::VectorXcd rhs_;
};

ReducedSystem assemble_system(const SystemParams& params, const AssemblyOptions& options = {});

/// Seeds covering <a>, <a^dagger a>, <a^dagger2 a2> and the adjacent
/// coherence <a^dagger b> (when N >= 2), as far as n_max allows.
std::vector<CorrelatorIndex> observable_seeds(int n_cavities, int n_max);

/// Text dump, one line per tagged nonzero: `row col re im origin`. Entries
/// of I print `I` in the col field.
void write_system_dump(const ReducedSystem& system, std::ostream& out);

}  // namespace cavisteady
