#include "cavisteady/steady_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

#include "cavisteady/errors.hpp"

namespace cavisteady {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::kExact: return "exact";
    case Method::kPert0: return "pert0";
    case Method::kPert1: return "pert1";
    case Method::kPert2: return "pert2";
    case Method::kOracle: return "oracle";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (auto m : {Method::kExact, Method::kPert0, Method::kPert1, Method::kPert2, Method::kOracle}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

SolutionVector::SolutionVector(SystemParams params, Method method, std::vector<CorrelatorIndex> rows,
                               Eigen::VectorXcd values, double residual)
    : params_(std::move(params)),
      method_(method),
      rows_(std::move(rows)),
      values_(std::move(values)),
      residual_(residual) {
  index_.reserve(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) index_.emplace(rows_[r], static_cast<Eigen::Index>(r));
}

std::optional<Complex> SolutionVector::value(const CorrelatorIndex& idx) const {
  if (idx.is_identity()) return Complex{1.0, 0.0};
  const auto it = index_.find(canonicalize(idx));
  if (it == index_.end()) return std::nullopt;
  return values_[it->second];
}

Complex SolutionVector::at(const CorrelatorIndex& idx) const {
  if (auto v = value(idx)) return *v;
  throw Error(ErrorCode::kMissingMoment, "no value for correlator " + idx.to_string());
}

std::optional<Complex> SolutionVector::single(PairIndex pair) const {
  return value(CorrelatorIndex::single(params_.n_cavities(), pair));
}

namespace {

// Exposes the diagonal of U, which Eigen keeps inside the supernodal L store.
class PivotSparseLu : public Eigen::SparseLU<SparseLu::SparseMatrix, Eigen::COLAMDOrdering<int>> {
 public:
  void pivot_range(double& lo, double& hi) const {
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (Eigen::Index j = 0; j < this->cols(); ++j) {
      double d = 0.0;
      for (typename SCMatrix::InnerIterator it(m_Lstore, j); it; ++it) {
        if (it.index() == j) {
          d = std::abs(it.value());
          break;
        }
      }
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    if (this->cols() == 0) lo = 0.0;
  }
};

}  // namespace

struct SparseLu::Impl {
  PivotSparseLu lu;
};

SparseLu::SparseLu(const SparseMatrix& a, double relative_pivot_tolerance) : impl_(std::make_unique<Impl>()) {
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) max_norm_ = std::max(max_norm_, std::abs(it.value()));
  }
  if (a.rows() == 0) return;
  impl_->lu.analyzePattern(a);
  impl_->lu.factorize(a);
  if (impl_->lu.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularSystem, "LU factorization failed: " + impl_->lu.lastErrorMessage());
  }
  impl_->lu.pivot_range(min_pivot_, max_pivot_);
  if (!(min_pivot_ >= relative_pivot_tolerance * max_norm_)) {
    throw Error(ErrorCode::kSingularSystem,
                "pivot " + std::to_string(min_pivot_) + " below " + std::to_string(relative_pivot_tolerance) +
                    " x max-norm " + std::to_string(max_norm_) + "; steady state is not unique");
  }
}

SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;
SparseLu::~SparseLu() = default;

Eigen::VectorXcd SparseLu::solve(const Eigen::VectorXcd& b) const {
  if (b.size() == 0) return b;
  Eigen::VectorXcd x = impl_->lu.solve(b);
  return x;
}

Eigen::MatrixXcd SparseLu::solve(const Eigen::MatrixXcd& b) const {
  if (b.rows() == 0) return b;
  Eigen::MatrixXcd x = impl_->lu.solve(b);
  return x;
}

double SparseLu::condition_estimate() const noexcept {
  if (min_pivot_ == 0.0) return std::numeric_limits<double>::infinity();
  return max_pivot_ / min_pivot_;
}

SolutionVector solve_steady(const ReducedSystem& system, const SolveOptions& options) {
  SparseLu lu(system.matrix(), options.relative_pivot_tolerance);
  Eigen::VectorXcd v = -lu.solve(system.rhs());
  const double res = residual_norm(system, v);
  SolutionVector out(system.params(), Method::kExact, system.rows(), std::move(v), res);
  if (lu.condition_estimate() > options.ill_conditioned_threshold) {
    out.add_warning("IllConditioned: pivot ratio " + std::to_string(lu.condition_estimate()));
  }
  return out;
}

double residual_norm(const ReducedSystem& system, const Eigen::VectorXcd& v) {
  if (v.size() != static_cast<Eigen::Index>(system.dimension())) {
    throw Error(ErrorCode::kInvalidConfig, "residual_norm: dimension mismatch");
  }
  if (v.size() == 0) return 0.0;
  const Eigen::VectorXcd r = system.matrix() * v + system.rhs();
  return r.cwiseAbs().maxCoeff();
}

double residual_norm(const ReducedSystem& system, const SolutionVector& v) {
  Eigen::VectorXcd dense = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(system.dimension()));
  for (std::size_t r = 0; r < system.dimension(); ++r) {
    if (auto x = v.value(system.rows()[r])) dense[static_cast<Eigen::Index>(r)] = *x;
  }
  return residual_norm(system, dense);
}

}  // namespace cavisteady
