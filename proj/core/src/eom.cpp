#include "cavisteady/eom.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <ostream>
#include <string>
#include <tuple>

#include "cavisteady/errors.hpp"

namespace cavisteady {

std::string_view to_string(Origin origin) noexcept {
  switch (origin) {
    case Origin::kDetuning: return "detuning";
    case Origin::kKerrDiagonal: return "kerr-diagonal";
    case Origin::kKerrRaise: return "kerr-raise";
    case Origin::kDecay: return "decay";
    case Origin::kPumpDiagonal: return "pump-diagonal";
    case Origin::kPumpLower: return "pump-lower";
    case Origin::kDrive: return "drive";
    case Origin::kHop: return "hop";
  }
  return "unknown";
}

std::vector<std::pair<int, int>> ring_links(int n_cavities) {
  std::vector<std::pair<int, int>> links;
  if (n_cavities == 2) {
    links.emplace_back(0, 1);
  } else if (n_cavities >= 3) {
    for (int i = 0; i < n_cavities; ++i) links.emplace_back(i, (i + 1) % n_cavities);
  }
  return links;
}

namespace {

constexpr Complex kI{0.0, 1.0};

class TermSink {
 public:
  TermSink(const CorrelatorIndex& base, int n_max, std::vector<EomTerm>& out)
      : base_(base), n_max_(n_max), out_(out) {}

  void self(Complex c, Origin origin) {
    if (c != Complex{}) out_.push_back({base_, c, origin});
  }

  // Shifts cavity i by (dm, dn); dropped when an exponent leaves [0, n_max].
  void shifted(int i, int dm, int dn, Complex c, Origin origin) {
    if (c == Complex{}) return;
    auto t = base_;
    if (!shift(t, i, dm, dn)) return;
    out_.push_back({std::move(t), c, origin});
  }

  void hop(int i, int dmi, int dni, int j, int dmj, int dnj, Complex c) {
    if (c == Complex{}) return;
    auto t = base_;
    if (!shift(t, i, dmi, dni) || !shift(t, j, dmj, dnj)) return;
    out_.push_back({std::move(t), c, Origin::kHop});
  }

 private:
  bool shift(CorrelatorIndex& t, int i, int dm, int dn) const {
    auto& p = t[i];
    p.m += dm;
    p.n += dn;
    return p.m >= 0 && p.n >= 0 && p.m <= n_max_ && p.n <= n_max_;
  }

  const CorrelatorIndex& base_;
  int n_max_;
  std::vector<EomTerm>& out_;
};

}  // namespace

std::vector<EomTerm> derivative_terms(const CorrelatorIndex& idx, const SystemParams& params) {
  std::vector<EomTerm> out;
  TermSink sink(idx, params.n_max(), out);

  const double gamma = params.gamma();
  const double pump = params.pump();
  const bool pump_diag = params.pump_diagonal() == PumpDiagonal::kCorrected;

  for (int i = 0; i < idx.size(); ++i) {
    const double m = idx[i].m;
    const double n = idx[i].n;
    if (m == 0 && n == 0) continue;

    sink.self(kI * params.delta() * (m - n), Origin::kDetuning);
    sink.self(kI * (params.u() / 2.0) * (m * (m - 1) - n * (n - 1)), Origin::kKerrDiagonal);
    sink.self(-(gamma / 2.0) * (m + n), Origin::kDecay);
    if (pump_diag) sink.self((pump / 2.0) * (m + n), Origin::kPumpDiagonal);

    sink.shifted(i, -1, -1, pump * m * n, Origin::kPumpLower);
    sink.shifted(i, -1, 0, kI * params.omega() * m, Origin::kDrive);
    sink.shifted(i, 0, -1, -kI * params.omega() * n, Origin::kDrive);
    sink.shifted(i, +1, +1, kI * params.u() * (m - n), Origin::kKerrRaise);
  }

  const Complex ij = kI * params.j();
  for (const auto& [i, j] : ring_links(idx.size())) {
    const double m = idx[i].m;
    const double n = idx[i].n;
    const double mu = idx[j].m;
    const double nu = idx[j].n;
    sink.hop(i, -1, 0, j, +1, 0, ij * m);
    sink.hop(i, +1, 0, j, -1, 0, ij * mu);
    sink.hop(i, 0, -1, j, 0, +1, -ij * n);
    sink.hop(i, 0, +1, j, 0, -1, -ij * nu);
  }
  return out;
}

std::optional<std::size_t> ReducedSystem::row_of(const CorrelatorIndex& idx) const {
  const auto it = index_.find(canonicalize(idx));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

struct RawEntry {
  CorrelatorIndex col;  // canonical; identity for I
  Complex value;
  Origin origin;
};

std::vector<RawEntry> canonical_terms(const CorrelatorIndex& row, const SystemParams& params) {
  std::vector<RawEntry> out;
  for (auto& term : derivative_terms(row, params)) {
    out.push_back({term.target.is_identity() ? term.target : canonicalize(term.target),
                   term.coefficient, term.origin});
  }
  return out;
}

void check_rows_feasible(const SystemParams& params, const AssemblyOptions& options) {
  const auto raw = raw_index_count(params.n_cavities(), params.n_max());
  const auto orbit_floor = raw / static_cast<std::uint64_t>(2 * params.n_cavities());
  if (orbit_floor > options.max_nonzeros) {
    throw Error(ErrorCode::kDimensionOverflow,
                "about " + std::to_string(orbit_floor) + " canonical rows exceed the cap of " +
                    std::to_string(options.max_nonzeros) + " nonzeros");
  }
}

}  // namespace

ReducedSystem assemble_system(const SystemParams& params, const AssemblyOptions& options) {
  ReducedSystem sys(params);
  const int n_cav = params.n_cavities();

  std::unordered_map<CorrelatorIndex, std::vector<RawEntry>, CorrelatorHash> terms;
  if (options.seeds.empty()) {
    check_rows_feasible(params, options);
    sys.rows_ = enumerate_canonical(n_cav, params.n_max());
  } else {
    std::deque<CorrelatorIndex> queue;
    const auto visit = [&](const CorrelatorIndex& idx) {
      if (idx.is_identity() || terms.contains(idx)) return;
      terms.emplace(idx, std::vector<RawEntry>{});
      queue.push_back(idx);
    };
    for (const auto& seed : options.seeds) {
      if (seed.size() != n_cav || seed.max_exponent() > params.n_max()) {
        throw Error(ErrorCode::kInvalidConfig, "seed " + seed.to_string() + " does not fit the ring");
      }
      visit(canonicalize(seed));
    }
    std::size_t stored = 0;
    while (!queue.empty()) {
      auto idx = std::move(queue.front());
      queue.pop_front();
      auto entries = canonical_terms(idx, params);
      stored += entries.size();
      if (stored > options.max_nonzeros) {
        throw Error(ErrorCode::kDimensionOverflow,
                    "closure exceeds the cap of " + std::to_string(options.max_nonzeros) + " nonzeros");
      }
      for (const auto& e : entries) visit(e.col);
      terms[idx] = std::move(entries);
    }
    sys.rows_.reserve(terms.size());
    for (const auto& [idx, _] : terms) sys.rows_.push_back(idx);
    std::sort(sys.rows_.begin(), sys.rows_.end());
  }

  sys.index_.reserve(sys.rows_.size());
  for (std::size_t r = 0; r < sys.rows_.size(); ++r) sys.index_.emplace(sys.rows_[r], r);

  const auto dim = sys.rows_.size();
  sys.rhs_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  std::vector<Eigen::Triplet<Complex>> triplets;

  for (std::size_t r = 0; r < dim; ++r) {
    const auto& row = sys.rows_[r];
    auto raw = options.seeds.empty() ? canonical_terms(row, params) : std::move(terms.at(row));

    std::vector<TaggedEntry> merged;
    merged.reserve(raw.size());
    for (const auto& e : raw) {
      const std::size_t col = e.col.is_identity() ? kIdentityColumn : sys.index_.at(e.col);
      merged.push_back({r, col, e.value, e.origin});
    }
    std::sort(merged.begin(), merged.end(), [](const TaggedEntry& a, const TaggedEntry& b) {
      return std::tie(a.col, a.origin) < std::tie(b.col, b.origin);
    });
    std::size_t out = 0;
    for (std::size_t k = 0; k < merged.size(); ++k) {
      if (out > 0 && merged[out - 1].col == merged[k].col && merged[out - 1].origin == merged[k].origin) {
        merged[out - 1].value += merged[k].value;
      } else {
        merged[out++] = merged[k];
      }
    }
    merged.resize(out);

    for (const auto& e : merged) {
      if (e.value == Complex{}) continue;
      if (e.col == kIdentityColumn) {
        sys.rhs_[static_cast<Eigen::Index>(r)] += e.value;
      } else {
        triplets.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e.col), e.value);
      }
      sys.entries_.push_back(e);
    }
    if (sys.entries_.size() > options.max_nonzeros) {
      throw Error(ErrorCode::kDimensionOverflow,
                  "assembled system exceeds the cap of " + std::to_string(options.max_nonzeros) + " nonzeros");
    }
  }

  sys.matrix_.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  sys.matrix_.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix_.makeCompressed();
  return sys;
}

std::vector<CorrelatorIndex> observable_seeds(int n_cavities, int n_max) {
  std::vector<CorrelatorIndex> seeds;
  seeds.push_back(CorrelatorIndex::single(n_cavities, {0, 1}));
  seeds.push_back(CorrelatorIndex::single(n_cavities, {1, 1}));
  if (n_max >= 2) seeds.push_back(CorrelatorIndex::single(n_cavities, {2, 2}));
  if (n_cavities >= 2) {
    auto nn = CorrelatorIndex::identity(n_cavities);
    nn[0] = {1, 0};
    nn[1] = {0, 1};
    seeds.push_back(nn);
  }
  return seeds;
}

void write_system_dump(const ReducedSystem& system, std::ostream& out) {
  char buf[96];
  for (const auto& e : system.entries()) {
    const std::string col = e.col == kIdentityColumn ? "I" : std::to_string(e.col);
    std::snprintf(buf, sizeof buf, "%.17g %.17g", e.value.real(), e.value.imag());
    out << e.row << ' ' << col << ' ' << buf << ' ' << to_string(e.origin) << '\n';
  }
}

}  // namespace cavisteady
