#include "cavisteady/perturbative.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cavisteady/errors.hpp"

namespace cavisteady {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t slot(Pattern p) { return static_cast<std::size_t>(p); }

bool is_consecutive(const std::vector<int>& support, int n) {
  const auto k = static_cast<int>(support.size());
  for (int start : support) {
    bool ok = true;
    for (int t = 1; t < k && ok; ++t) {
      ok = std::binary_search(support.begin(), support.end(), (start + t) % n);
    }
    if (ok) return true;
  }
  return false;
}

SystemParams unit_hopping(const SystemParams& params) {
  auto raw = params.record();
  raw.j = 1.0;
  return validate_params(raw);
}

}  // namespace

std::string_view to_string(Pattern pattern) noexcept {
  switch (pattern) {
    case Pattern::kA: return "a";
    case Pattern::kB: return "b";
    case Pattern::kC: return "c";
    case Pattern::kD: return "d";
    case Pattern::kE: return "e";
    case Pattern::kOther: return "other";
  }
  return "other";
}

Pattern classify_pattern(const CorrelatorIndex& idx) {
  const int n = idx.size();
  const auto support = idx.support();
  switch (support.size()) {
    case 1: return Pattern::kA;
    case 2: {
      const int d = support[1] - support[0];
      const int dist = std::min(d, n - d);
      if (dist == 1) return Pattern::kB;
      if (dist == 2) return Pattern::kE;
      return Pattern::kOther;
    }
    case 3: return is_consecutive(support, n) ? Pattern::kC : Pattern::kOther;
    case 4: return is_consecutive(support, n) ? Pattern::kD : Pattern::kOther;
    default: return Pattern::kOther;
  }
}

std::size_t PatternSpace::insert(const CorrelatorIndex& idx) {
  const auto [it, inserted] = index_.try_emplace(idx, items_.size());
  if (inserted) items_.push_back(idx);
  return it->second;
}

std::optional<std::size_t> PatternSpace::find(const CorrelatorIndex& idx) const {
  const auto it = index_.find(idx);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BlockSystem::SparseMatrix BlockSystem::block(BlockKind kind, Pattern row, Pattern col) const {
  SparseMatrix out(static_cast<Eigen::Index>(space(row).size()), static_cast<Eigen::Index>(space(col).size()));
  if (const auto it = triplets_.find({kind, row, col}); it != triplets_.end()) {
    out.setFromTriplets(it->second.begin(), it->second.end());
  }
  out.makeCompressed();
  return out;
}

bool BlockSystem::has_block(BlockKind kind, Pattern row, Pattern col) const {
  const auto it = triplets_.find({kind, row, col});
  return it != triplets_.end() && !it->second.empty();
}

Eigen::VectorXcd BlockSystem::drive(Pattern row) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space(row).size()));
  for (const auto& [r, v] : drive_[slot(row)]) out[static_cast<Eigen::Index>(r)] += v;
  return out;
}

/// Sorts generator terms of selected rows into BlockSystem buckets.
class BlockAssembler {
 public:
  explicit BlockAssembler(const SystemParams& params) : params_(unit_hopping(params)) {
    blocks_.n_cavities_ = params.n_cavities();
  }

  void declare(Pattern p, const std::vector<CorrelatorIndex>& rows) {
    for (const auto& r : rows) blocks_.spaces_[slot(p)].insert(r);
  }

  // Adds the equations of every declared row of pattern p.
  void add_rows(Pattern p) {
    const auto rows = blocks_.spaces_[slot(p)].items();
    for (std::size_t r = 0; r < rows.size(); ++r) add_row(p, r, rows[r]);
  }

  BlockSystem finish() { return std::move(blocks_); }

 private:
  void add_row(Pattern row_pattern, std::size_t row, const CorrelatorIndex& idx) {
    for (const auto& term : derivative_terms(idx, params_)) {
      if (term.target.is_identity()) {
        blocks_.drive_[slot(row_pattern)].emplace_back(row, term.coefficient);
        continue;
      }
      const auto col_idx = canonicalize(term.target);
      const auto col_pattern = classify_pattern(col_idx);
      const auto col = blocks_.spaces_[slot(col_pattern)].insert(col_idx);
      const bool within = col_pattern == row_pattern;
      BlockKind kind;
      Complex value = term.coefficient;
      if (term.origin == Origin::kHop) {
        kind = within ? BlockKind::kS : BlockKind::kR;
        value /= kI;  // params_ has J = 1
      } else if (within) {
        kind = BlockKind::kM;
      } else {
        if (term.origin != Origin::kDrive && term.origin != Origin::kPumpLower) {
          throw std::logic_error("cross-pattern term with origin " + std::string(to_string(term.origin)));
        }
        kind = BlockKind::kB;
      }
      blocks_.triplets_[{kind, row_pattern, col_pattern}].emplace_back(
          static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), value);
    }
  }

  SystemParams params_;
  BlockSystem blocks_;
};

BlockSystem build_blocks(const SystemParams& params) {
  const int n = params.n_cavities();
  if (n < 4) {
    throw Error(ErrorCode::kUnsupportedN, "block expansion needs N >= 4, got " + std::to_string(n));
  }
  const int n_max = params.n_max();

  std::vector<CorrelatorIndex> a_rows;
  std::vector<CorrelatorIndex> b_rows;
  for (int m = 0; m <= n_max; ++m) {
    for (int k = 0; k <= n_max; ++k) {
      if (m == 0 && k == 0) continue;
      a_rows.push_back(CorrelatorIndex::single(n, {m, k}));
    }
  }
  for (const auto& first : a_rows) {
    for (const auto& second : a_rows) {
      auto idx = first;
      idx[1] = second[0];
      b_rows.push_back(canonicalize(idx));
    }
  }
  std::sort(a_rows.begin(), a_rows.end());
  std::sort(b_rows.begin(), b_rows.end());
  b_rows.erase(std::unique(b_rows.begin(), b_rows.end()), b_rows.end());

  BlockAssembler assembler(params);
  assembler.declare(Pattern::kA, a_rows);
  assembler.declare(Pattern::kB, b_rows);
  assembler.add_rows(Pattern::kA);
  assembler.add_rows(Pattern::kB);
  auto blocks = assembler.finish();

  for (auto p : {Pattern::kD, Pattern::kOther}) {
    if (blocks.space(p).size() != 0) {
      throw std::logic_error("a/b rows reached pattern " + std::string(to_string(p)));
    }
  }
  return blocks;
}

BlockSystem build_full_blocks(const SystemParams& params) {
  std::array<std::vector<CorrelatorIndex>, kPatternCount> rows;
  for (auto& idx : enumerate_canonical(params.n_cavities(), params.n_max())) {
    rows[slot(classify_pattern(idx))].push_back(std::move(idx));
  }
  BlockAssembler assembler(params);
  for (std::size_t p = 0; p < kPatternCount; ++p) assembler.declare(static_cast<Pattern>(p), rows[p]);
  for (std::size_t p = 0; p < kPatternCount; ++p) assembler.add_rows(static_cast<Pattern>(p));
  return assembler.finish();
}

Complex zero_order_product(const CorrelatorIndex& idx, const SolutionVector& v_a0) {
  Complex product{1.0, 0.0};
  for (const auto& pair : idx.pairs()) {
    if (pair.is_zero()) continue;
    const auto v = v_a0.single(pair);
    if (!v) {
      throw Error(ErrorCode::kMissingMoment,
                  "single-cavity moment (" + std::to_string(pair.m) + "," + std::to_string(pair.n) + ") missing");
    }
    product *= *v;
  }
  return product;
}

namespace {

Eigen::VectorXcd products(const PatternSpace& space, const SolutionVector& v_a0) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(space.size()));
  for (std::size_t k = 0; k < space.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = zero_order_product(space.items()[k], v_a0);
  }
  return out;
}

}  // namespace

PerturbativeSeries expand_perturbative(const SystemParams& params) {
  PerturbativeSeries s;
  s.blocks = build_blocks(params);
  s.j = params.j();
  const auto& bl = s.blocks;

  const auto s_a = bl.s_a();
  const auto r_ab = bl.r_ab();
  const SparseLu lu_a(bl.m_a());
  const SparseLu lu_b(bl.m_b());

  s.a0 = -lu_a.solve(bl.i_a());
  const SolutionVector single(params, Method::kPert0, bl.space(Pattern::kA).items(), s.a0, 0.0);
  s.b0 = products(bl.space(Pattern::kB), single);
  s.c0 = products(bl.space(Pattern::kC), single);
  s.e0 = products(bl.space(Pattern::kE), single);

  s.a1 = -lu_a.solve(Eigen::VectorXcd(kI * (s_a * s.a0 + r_ab * s.b0)));
  const Eigen::VectorXcd rhs_b1 =
      kI * (bl.r_ba() * s.a0 + bl.s_b() * s.b0 + bl.r_bc() * s.c0 + bl.r_be() * s.e0) + bl.b_ba() * s.a1;
  s.b1 = -lu_b.solve(rhs_b1);
  s.a2 = -lu_a.solve(Eigen::VectorXcd(kI * (s_a * s.a1 + r_ab * s.b1)));
  return s;
}

Eigen::VectorXcd truncated_series(const PerturbativeSeries& series, int order) {
  if (order < 0 || order > 2) {
    throw Error(ErrorCode::kInvalidConfig, "perturbative order must be 0, 1 or 2");
  }
  Eigen::VectorXcd v = series.a0;
  if (order >= 1) v += series.j * series.a1;
  if (order >= 2) v += series.j * series.j * series.a2;
  return v;
}

double perturbative_residual(const PerturbativeSeries& series, int order) {
  const auto& bl = series.blocks;
  const Eigen::VectorXcd v_a = truncated_series(series, order);
  Eigen::VectorXcd v_b = series.b0;
  if (order >= 2) v_b += series.j * series.b1;
  const Complex ij = kI * series.j;
  const Eigen::VectorXcd r = bl.m_a() * v_a + ij * (bl.s_a() * v_a) + ij * (bl.r_ab() * v_b) + bl.i_a();
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

SolutionVector solve_perturbative(const SystemParams& params, int order) {
  const auto series = expand_perturbative(params);
  auto v = truncated_series(series, order);
  const Method method = order == 0 ? Method::kPert0 : order == 1 ? Method::kPert1 : Method::kPert2;
  return SolutionVector(params, method, series.blocks.space(Pattern::kA).items(), std::move(v),
                        perturbative_residual(series, order));
}

SolutionVector solve_recursive_exact(const SystemParams& params) {
  const int n = params.n_cavities();
  if (n != 2 && n != 3) {
    throw Error(ErrorCode::kUnsupportedN, "recursive elimination is implemented for N = 2, 3; got " +
                                               std::to_string(n));
  }
  const auto bl = build_full_blocks(params);
  using P = Pattern;
  using K = BlockKind;

  // The elimination below assumes a tridiagonal a-b-c coupling.
  for (auto [row, col] : {std::pair{P::kA, P::kC}, std::pair{P::kC, P::kA}}) {
    if (bl.has_block(K::kR, row, col) || bl.has_block(K::kB, row, col)) {
      throw std::logic_error("unexpected direct coupling between a and c");
    }
  }

  const Complex ij = kI * params.j();
  const auto dense = [&](K kind, P row, P col) { return Eigen::MatrixXcd(bl.block(kind, row, col)); };
  const auto solve_dense = [](const Eigen::MatrixXcd& k, const Eigen::MatrixXcd& rhs) {
    const SparseLu lu(k.sparseView());
    return lu.solve(rhs);
  };

  Eigen::MatrixXcd k_b = dense(K::kM, P::kB, P::kB) + ij * dense(K::kS, P::kB, P::kB);
  Eigen::MatrixXcd f_cb;
  if (n == 3) {
    const Eigen::MatrixXcd k_c = dense(K::kM, P::kC, P::kC) + ij * dense(K::kS, P::kC, P::kC);
    f_cb = -solve_dense(k_c, dense(K::kB, P::kC, P::kB) + ij * dense(K::kR, P::kC, P::kB));
    k_b += ij * dense(K::kR, P::kB, P::kC) * f_cb;
  }
  const Eigen::MatrixXcd f_ba =
      -solve_dense(k_b, dense(K::kB, P::kB, P::kA) + ij * dense(K::kR, P::kB, P::kA));
  const Eigen::MatrixXcd k_a =
      dense(K::kM, P::kA, P::kA) + ij * dense(K::kS, P::kA, P::kA) + ij * dense(K::kR, P::kA, P::kB) * f_ba;
  const Eigen::VectorXcd v_a = -solve_dense(k_a, Eigen::MatrixXcd(bl.drive(P::kA)));
  const Eigen::VectorXcd v_b = f_ba * v_a;

  std::vector<CorrelatorIndex> rows;
  std::vector<Eigen::VectorXcd> parts{v_a, v_b};
  if (n == 3) parts.emplace_back(f_cb * v_b);
  for (auto p : {P::kA, P::kB, P::kC}) {
    const auto& items = bl.space(p).items();
    rows.insert(rows.end(), items.begin(), items.end());
  }
  Eigen::VectorXcd values(static_cast<Eigen::Index>(rows.size()));
  Eigen::Index offset = 0;
  for (const auto& part : parts) {
    values.segment(offset, part.size()) = part;
    offset += part.size();
  }

  const auto system = assemble_system(params);
  SolutionVector tmp(params, Method::kExact, rows, values, 0.0);
  const double res = residual_norm(system, tmp);
  return SolutionVector(params, Method::kExact, std::move(rows), std::move(values), res);
}

}  // namespace cavisteady
