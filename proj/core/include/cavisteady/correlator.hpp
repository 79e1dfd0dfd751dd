#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cavisteady {

/// Exponents of one cavity inside a normal-ordered moment: a^{dagger m} a^{n}.
struct PairIndex {
  int m = 0;
  int n = 0;

  [[nodiscard]] constexpr bool is_zero() const noexcept { return m == 0 && n == 0; }
  [[nodiscard]] constexpr int order() const noexcept { return m + n; }

  friend constexpr bool operator==(const PairIndex&, const PairIndex&) = default;
};

/// Length-N sequence of exponent pairs naming <prod_i a_i^{dagger m_i} a_i^{n_i}>.
///
/// The all-zero sequence is the identity; it is representable (as an
/// equation-of-motion target) but never appears as a vector entry.
class CorrelatorIndex {
 public:
  CorrelatorIndex() = default;
  explicit CorrelatorIndex(std::vector<PairIndex> pairs) : pairs_(std::move(pairs)) {}
  CorrelatorIndex(std::initializer_list<PairIndex> pairs) : pairs_(pairs) {}

  /// Identity correlator on an N-ring.
  static CorrelatorIndex identity(int n_cavities);
  /// <a^{dagger m} a^{n}> on cavity 0 of an N-ring.
  static CorrelatorIndex single(int n_cavities, PairIndex pair);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(pairs_.size()); }
  [[nodiscard]] const PairIndex& operator[](int i) const { return pairs_[static_cast<std::size_t>(i)]; }
  PairIndex& operator[](int i) { return pairs_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::span<const PairIndex> pairs() const noexcept { return pairs_; }

  [[nodiscard]] bool is_identity() const noexcept;
  /// Positions carrying a nonzero pair, ascending.
  [[nodiscard]] std::vector<int> support() const;
  /// Sum of all exponents.
  [[nodiscard]] int total_order() const noexcept;
  [[nodiscard]] int max_exponent() const noexcept;
  /// Per-cavity (m, n) -> (n, m); the index of the complex-conjugate moment.
  [[nodiscard]] CorrelatorIndex conjugate() const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const CorrelatorIndex&, const CorrelatorIndex&) = default;

  /// Total order used for canonical representatives: positions compared left
  /// to right by (m + n, m).
  friend std::strong_ordering operator<=>(const CorrelatorIndex& a, const CorrelatorIndex& b);

 private:
  std::vector<PairIndex> pairs_;
};

struct CorrelatorHash {
  std::size_t operator()(const CorrelatorIndex& idx) const noexcept;
};

/// The 2N images of idx under ring rotations and reflection (with repeats).
std::vector<CorrelatorIndex> dihedral_images(const CorrelatorIndex& idx);

/// Unique representative of the dihedral orbit: the greatest image.
CorrelatorIndex canonicalize(const CorrelatorIndex& idx);

[[nodiscard]] bool is_canonical(const CorrelatorIndex& idx);

/// One representative per non-identity orbit, ascending in canonical order.
std::vector<CorrelatorIndex> enumerate_canonical(int n_cavities, int n_max);

/// (n_max + 1)^(2N) - 1, saturating at UINT64_MAX.
std::uint64_t raw_index_count(int n_cavities, int n_max) noexcept;

}  // namespace cavisteady
