#include "cavisteady/density_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "cavisteady/errors.hpp"

namespace cavisteady {

using SpMat = Eigen::SparseMatrix<Complex>;

DensityMatrix::DensityMatrix(int n_cavities, int n_cut, Eigen::MatrixXcd rho)
    : n_cavities_(n_cavities), n_cut_(n_cut), rho_(std::move(rho)) {}

double DensityMatrix::hermiticity_error() const {
  if (rho_.size() == 0) return 0.0;
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SpMat ladder_operator(int n_cut) {
  const int d = n_cut + 1;
  SpMat a(d, d);
  std::vector<Eigen::Triplet<Complex>> t;
  for (int n = 1; n < d; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

namespace {

SpMat identity(Eigen::Index d) {
  SpMat id(d, d);
  id.setIdentity();
  return id;
}

// Embeds a single-cavity operator at position `site` of the ring.
SpMat embed(const SpMat& op, int site, int n_cavities, Eigen::Index local_dim) {
  SpMat out = identity(1);
  for (int i = 0; i < n_cavities; ++i) {
    SpMat next = Eigen::kroneckerProduct(out, i == site ? op : identity(local_dim)).eval();
    out = std::move(next);
  }
  return out;
}

Eigen::Index hilbert_dimension(int n_cavities, int n_cut, Eigen::Index cap) {
  Eigen::Index d = 1;
  for (int i = 0; i < n_cavities; ++i) {
    d *= n_cut + 1;
    if (d > cap) {
      throw Error(ErrorCode::kCapExceeded, "(n_cut + 1)^N exceeds the oracle cap of " + std::to_string(cap));
    }
  }
  return d;
}

SpMat power(const SpMat& op, int k) {
  SpMat out = identity(op.rows());
  for (int i = 0; i < k; ++i) out = (out * op).pruned();
  return out;
}

}  // namespace

SpMat liouvillian(const SystemParams& params, int n_cut) {
  const int n_cav = params.n_cavities();
  const Eigen::Index local = n_cut + 1;
  const SpMat a1 = ladder_operator(n_cut);

  std::vector<SpMat> a;
  for (int i = 0; i < n_cav; ++i) a.push_back(embed(a1, i, n_cav, local));
  const Eigen::Index d = a.front().rows();
  const SpMat id = identity(d);

  SpMat h(d, d);
  for (int i = 0; i < n_cav; ++i) {
    const SpMat ad = SpMat(a[i].adjoint());
    const SpMat num = ad * a[i];
    h += params.delta() * num + (params.u() / 2.0) * SpMat(ad * ad * a[i] * a[i]) +
         params.omega() * SpMat(ad + a[i]);
  }
  for (const auto& [i, j] : ring_links(n_cav)) {
    h += params.j() * SpMat(SpMat(a[i].adjoint()) * a[j] + SpMat(a[j].adjoint()) * a[i]);
  }

  const Complex minus_i{0.0, -1.0};
  SpMat l = minus_i * SpMat(Eigen::kroneckerProduct(id, h)) -
            minus_i * SpMat(Eigen::kroneckerProduct(SpMat(h.transpose()), id));

  // D[c] rho = c rho c^dagger - {c^dagger c, rho}/2, vec(A X B) = (B^T kron A) vec X.
  const auto dissipator = [&](const SpMat& c, double rate) {
    const SpMat cdc = SpMat(c.adjoint()) * c;
    return SpMat(rate * (SpMat(Eigen::kroneckerProduct(SpMat(c.conjugate()), c)) -
                         0.5 * SpMat(Eigen::kroneckerProduct(id, cdc)) -
                         0.5 * SpMat(Eigen::kroneckerProduct(SpMat(cdc.transpose()), id))));
  };
  for (int i = 0; i < n_cav; ++i) {
    l += dissipator(a[i], params.gamma());
    if (params.pump() != 0.0) l += dissipator(SpMat(a[i].adjoint()), params.pump());
  }
  l.prune(Complex{0.0, 0.0});
  l.makeCompressed();
  return l;
}

DensityMatrix steady_density(const SystemParams& params, const OracleOptions& options) {
  const Eigen::Index d = hilbert_dimension(params.n_cavities(), options.n_cut, options.max_dimension);
  const SpMat l = liouvillian(params, options.n_cut);

  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<std::size_t>(l.nonZeros() + d));
  for (Eigen::Index k = 0; k < l.outerSize(); ++k) {
    for (SpMat::InnerIterator it(l, k); it; ++it) {
      if (it.row() != 0) t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Eigen::Index k = 0; k < d; ++k) t.emplace_back(0, k * (d + 1), Complex{1.0, 0.0});
  SpMat system(d * d, d * d);
  system.setFromTriplets(t.begin(), t.end());
  system.makeCompressed();

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(d * d);
  rhs[0] = 1.0;
  const SparseLu lu(system);
  const Eigen::VectorXcd x = lu.solve(rhs);
  Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
  return DensityMatrix(params.n_cavities(), options.n_cut, std::move(rho));
}

Complex moment_from_density(const DensityMatrix& rho, const CorrelatorIndex& exponents) {
  const int n_cav = rho.n_cavities();
  if (exponents.size() != n_cav) {
    throw Error(ErrorCode::kInvalidConfig, "exponent list length differs from N");
  }
  if (exponents.max_exponent() > rho.n_cut()) {
    throw Error(ErrorCode::kExponentExceedsCutoff,
                exponents.to_string() + " exceeds n_cut = " + std::to_string(rho.n_cut()));
  }
  const SpMat a = ladder_operator(rho.n_cut());
  const SpMat ad = SpMat(a.adjoint());
  SpMat op = identity(1);
  for (int i = 0; i < n_cav; ++i) {
    const SpMat local = (power(ad, exponents[i].m) * power(a, exponents[i].n)).pruned();
    SpMat next = Eigen::kroneckerProduct(op, local).eval();
    op = std::move(next);
  }
  // Tr(rho O) = sum_{k,l} rho_kl O_lk
  Complex acc{};
  const auto& r = rho.matrix();
  for (Eigen::Index k = 0; k < op.outerSize(); ++k) {
    for (SpMat::InnerIterator it(op, k); it; ++it) acc += r(it.col(), it.row()) * it.value();
  }
  return acc;
}

SolutionVector oracle_solution(const SystemParams& params, const OracleOptions& options) {
  const int n_cav = params.n_cavities();
  const auto rho = steady_density(params, options);
  const int top = std::min(options.n_cut, params.n_max());

  std::vector<CorrelatorIndex> rows;
  for (int m = 0; m <= top; ++m) {
    for (int n = 0; n <= top; ++n) {
      if (m != 0 || n != 0) rows.push_back(CorrelatorIndex::single(n_cav, {m, n}));
    }
  }
  if (n_cav >= 2) {
    auto nn = CorrelatorIndex::identity(n_cav);
    nn[0] = {1, 0};
    nn[1] = {0, 1};
    rows.push_back(nn);
  }
  Eigen::VectorXcd values(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    values[static_cast<Eigen::Index>(k)] = moment_from_density(rho, rows[k]);
  }

  const SpMat l = liouvillian(params, options.n_cut);
  const Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(rho.matrix().data(), rho.matrix().size());
  const double res = (l * vec).cwiseAbs().maxCoeff();
  return SolutionVector(params, Method::kOracle, std::move(rows), std::move(values), res);
}

}  // namespace cavisteady
