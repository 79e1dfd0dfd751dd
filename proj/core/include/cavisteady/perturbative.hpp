#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavisteady/correlator.hpp"
#include "cavisteady/eom.hpp"
#include "cavisteady/params.hpp"
#include "cavisteady/steady_solver.hpp"

namespace cavisteady {

/// Support geometry of a correlator on the ring, up to dihedral symmetry.
///   a: one cavity          b: two adjacent cavities
///   c: three consecutive   d: four consecutive
///   e: two cavities at distance two        other: anything else
enum class Pattern { kA, kB, kC, kD, kE, kOther };

inline constexpr std::size_t kPatternCount = 6;

std::string_view to_string(Pattern pattern) noexcept;

/// Classifies by the set of nonzero positions of idx on its idx.size()-ring.
/// Adjacency is tested before distance two, so N = 3 has no e pattern.
Pattern classify_pattern(const CorrelatorIndex& idx);

/// Ordered, indexed set of canonical correlators of one pattern.
class PatternSpace {
 public:
  /// Index of idx (which must be canonical), inserting it at the end if new.
  std::size_t insert(const CorrelatorIndex& idx);
  [[nodiscard]] std::optional<std::size_t> find(const CorrelatorIndex& idx) const;
  [[nodiscard]] const std::vector<CorrelatorIndex>& items() const noexcept { return items_; }
  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }

 private:
  std::vector<CorrelatorIndex> items_;
  std::unordered_map<CorrelatorIndex, std::size_t, CorrelatorHash> index_;
};

/// M: within-pattern, non-hopping. S: within-pattern hopping / (iJ).
/// R: cross-pattern hopping / (iJ). B: cross-pattern drive and pump.
enum class BlockKind { kM, kS, kR, kB };

/// Pattern-resolved pieces of the reduced generator,
///   d v_x/dt = (M_x + iJ S_x) v_x + sum_y (B_xy + iJ R_xy) v_y + I_x.
/// S and R hold the pure integer hopping multipliers; J is applied by the
/// caller. Absent blocks read as correctly sized zero matrices.
class BlockSystem {
 public:
  using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

  [[nodiscard]] int n_cavities() const noexcept { return n_cavities_; }
  [[nodiscard]] const PatternSpace& space(Pattern p) const { return spaces_[static_cast<std::size_t>(p)]; }
  [[nodiscard]] SparseMatrix block(BlockKind kind, Pattern row, Pattern col) const;
  [[nodiscard]] Eigen::VectorXcd drive(Pattern row) const;
  /// Whether any entry was recorded for (kind, row, col).
  [[nodiscard]] bool has_block(BlockKind kind, Pattern row, Pattern col) const;

  [[nodiscard]] SparseMatrix m_a() const { return block(BlockKind::kM, Pattern::kA, Pattern::kA); }
  [[nodiscard]] SparseMatrix s_a() const { return block(BlockKind::kS, Pattern::kA, Pattern::kA); }
  [[nodiscard]] SparseMatrix r_ab() const { return block(BlockKind::kR, Pattern::kA, Pattern::kB); }
  [[nodiscard]] SparseMatrix m_b() const { return block(BlockKind::kM, Pattern::kB, Pattern::kB); }
  [[nodiscard]] SparseMatrix s_b() const { return block(BlockKind::kS, Pattern::kB, Pattern::kB); }
  [[nodiscard]] SparseMatrix b_ba() const { return block(BlockKind::kB, Pattern::kB, Pattern::kA); }
  [[nodiscard]] SparseMatrix r_ba() const { return block(BlockKind::kR, Pattern::kB, Pattern::kA); }
  [[nodiscard]] SparseMatrix r_bc() const { return block(BlockKind::kR, Pattern::kB, Pattern::kC); }
  [[nodiscard]] SparseMatrix r_be() const { return block(BlockKind::kR, Pattern::kB, Pattern::kE); }
  [[nodiscard]] Eigen::VectorXcd i_a() const { return drive(Pattern::kA); }

 private:
  friend class BlockAssembler;

  int n_cavities_ = 0;
  std::array<PatternSpace, kPatternCount> spaces_;
  std::map<std::tuple<BlockKind, Pattern, Pattern>, std::vector<Eigen::Triplet<Complex>>> triplets_;
  std::array<std::vector<std::pair<std::size_t, Complex>>, kPatternCount> drive_;
};

/// Blocks of the a- and b-rows of the N-ring (N >= 4); columns of the
/// c- and e-patterns are collected as they are referenced. Hopping is
/// stripped of J, so params.j() does not enter.
BlockSystem build_blocks(const SystemParams& params);

/// Blocks of every row of the full N-ring system. Intended for small N.
BlockSystem build_full_blocks(const SystemParams& params);

/// Uncoupled (J = 0) value: product of single-cavity moments over the support.
Complex zero_order_product(const CorrelatorIndex& idx, const SolutionVector& v_a0);

/// Order-by-order coefficients of the expansion in J, laid out on the
/// a-, b-, c- and e-spaces of `blocks`.
struct PerturbativeSeries {
  BlockSystem blocks;
  double j = 0.0;
  Eigen::VectorXcd a0, a1, a2;
  Eigen::VectorXcd b0, b1;
  Eigen::VectorXcd c0, e0;
};

/// Throws Error(kUnsupportedN) for N < 4.
PerturbativeSeries expand_perturbative(const SystemParams& params);

/// v_a0 + J v_a1 + J^2 v_a2 truncated at `order` (0, 1 or 2), on the single-cavity rows.
Eigen::VectorXcd truncated_series(const PerturbativeSeries& series, int order);

/// Max-norm residual of the a-row equations at the series' J, with v_b truncated one order lower.
double perturbative_residual(const PerturbativeSeries& series, int order);

SolutionVector solve_perturbative(const SystemParams& params, int order);

/// Exact block elimination through the F matrices for N = 2 or 3. Returns
/// all a-, b- (and c-) correlators.
SolutionVector solve_recursive_exact(const SystemParams& params);

}  // namespace cavisteady
