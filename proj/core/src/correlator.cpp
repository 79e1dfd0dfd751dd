#include "cavisteady/correlator.hpp"

#include <algorithm>
#include <limits>

namespace cavisteady {

CorrelatorIndex CorrelatorIndex::identity(int n_cavities) {
  return CorrelatorIndex(std::vector<PairIndex>(static_cast<std::size_t>(n_cavities)));
}

CorrelatorIndex CorrelatorIndex::single(int n_cavities, PairIndex pair) {
  auto idx = identity(n_cavities);
  idx[0] = pair;
  return idx;
}

bool CorrelatorIndex::is_identity() const noexcept {
  return std::all_of(pairs_.begin(), pairs_.end(), [](const PairIndex& p) { return p.is_zero(); });
}

std::vector<int> CorrelatorIndex::support() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (!(*this)[i].is_zero()) out.push_back(i);
  }
  return out;
}

int CorrelatorIndex::total_order() const noexcept {
  int total = 0;
  for (const auto& p : pairs_) total += p.order();
  return total;
}

int CorrelatorIndex::max_exponent() const noexcept {
  int best = 0;
  for (const auto& p : pairs_) best = std::max({best, p.m, p.n});
  return best;
}

CorrelatorIndex CorrelatorIndex::conjugate() const {
  auto out = *this;
  for (auto& p : out.pairs_) std::swap(p.m, p.n);
  return out;
}

std::string CorrelatorIndex::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (i) s += ',';
    s += '(' + std::to_string(pairs_[i].m) + ',' + std::to_string(pairs_[i].n) + ')';
  }
  return s + '}';
}

std::strong_ordering operator<=>(const CorrelatorIndex& a, const CorrelatorIndex& b) {
  const auto n = std::min(a.pairs_.size(), b.pairs_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pa = a.pairs_[i];
    const auto& pb = b.pairs_[i];
    if (auto c = pa.order() <=> pb.order(); c != 0) return c;
    if (auto c = pa.m <=> pb.m; c != 0) return c;
  }
  return a.pairs_.size() <=> b.pairs_.size();
}

std::size_t CorrelatorHash::operator()(const CorrelatorIndex& idx) const noexcept {
  // FNV-1a over the exponent stream.
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& p : idx.pairs()) {
    h = (h ^ static_cast<std::uint64_t>(p.m)) * 1099511628211ULL;
    h = (h ^ static_cast<std::uint64_t>(p.n)) * 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

namespace {

// Position k of the image (shift, reflected) reads cavity source_position().
int source_position(int n, int shift, bool reflected, int k) {
  return reflected ? ((shift - k) % n + n) % n : (shift + k) % n;
}

// Compares image (shift, reflected) of idx against idx itself without
// materialising it.
std::strong_ordering compare_image(const CorrelatorIndex& idx, int shift, bool reflected) {
  const int n = idx.size();
  for (int k = 0; k < n; ++k) {
    const auto& img = idx[source_position(n, shift, reflected, k)];
    const auto& own = idx[k];
    if (auto c = img.order() <=> own.order(); c != 0) return c;
    if (auto c = img.m <=> own.m; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

}  // namespace

std::vector<CorrelatorIndex> dihedral_images(const CorrelatorIndex& idx) {
  const int n = idx.size();
  std::vector<CorrelatorIndex> out;
  out.reserve(static_cast<std::size_t>(2 * n));
  for (int reflected = 0; reflected < 2; ++reflected) {
    for (int shift = 0; shift < n; ++shift) {
      std::vector<PairIndex> pairs(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) {
        pairs[static_cast<std::size_t>(k)] = idx[source_position(n, shift, reflected != 0, k)];
      }
      out.emplace_back(std::move(pairs));
    }
  }
  return out;
}

CorrelatorIndex canonicalize(const CorrelatorIndex& idx) {
  const int n = idx.size();
  CorrelatorIndex best = idx;
  for (int reflected = 0; reflected < 2; ++reflected) {
    for (int shift = 0; shift < n; ++shift) {
      bool greater = false;
      for (int k = 0; k < n; ++k) {
        const auto& img = idx[source_position(n, shift, reflected != 0, k)];
        const auto& cur = best[k];
        if (img.order() != cur.order()) {
          greater = img.order() > cur.order();
          break;
        }
        if (img.m != cur.m) {
          greater = img.m > cur.m;
          break;
        }
      }
      if (greater) {
        for (int k = 0; k < n; ++k) best[k] = idx[source_position(n, shift, reflected != 0, k)];
      }
    }
  }
  return best;
}

bool is_canonical(const CorrelatorIndex& idx) {
  const int n = idx.size();
  for (int reflected = 0; reflected < 2; ++reflected) {
    for (int shift = 0; shift < n; ++shift) {
      if (compare_image(idx, shift, reflected != 0) > 0) return false;
    }
  }
  return true;
}

std::uint64_t raw_index_count(int n_cavities, int n_max) noexcept {
  const auto base = static_cast<std::uint64_t>(n_max + 1) * static_cast<std::uint64_t>(n_max + 1);
  std::uint64_t total = 1;
  for (int i = 0; i < n_cavities; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= base;
  }
  return total - 1;
}

std::vector<CorrelatorIndex> enumerate_canonical(int n_cavities, int n_max) {
  std::vector<CorrelatorIndex> out;
  auto idx = CorrelatorIndex::identity(n_cavities);
  // Odometer over all (m_i, n_i) in [0, n_max]^(2N); the first step leaves
  // the identity behind.
  while (true) {
    int pos = 0;
    for (; pos < n_cavities; ++pos) {
      auto& p = idx[pos];
      if (p.n < n_max) {
        ++p.n;
        break;
      }
      p.n = 0;
      if (p.m < n_max) {
        ++p.m;
        break;
      }
      p.m = 0;
    }
    if (pos == n_cavities) break;
    if (is_canonical(idx)) out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cavisteady
