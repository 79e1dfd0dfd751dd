#pragma once

#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavisteady/correlator.hpp"
#include "cavisteady/eom.hpp"
#include "cavisteady/params.hpp"
#include "cavisteady/steady_solver.hpp"

namespace cavisteady {

/// Brute-force reference: the full density matrix of the ring on a
/// Fock space truncated at n_cut photons per cavity. Cavity 0 is the most
/// significant factor of the tensor-product basis.
class DensityMatrix {
 public:
  DensityMatrix(int n_cavities, int n_cut, Eigen::MatrixXcd rho);

  [[nodiscard]] int n_cavities() const noexcept { return n_cavities_; }
  [[nodiscard]] int n_cut() const noexcept { return n_cut_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return rho_.rows(); }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }

  [[nodiscard]] Complex trace() const { return rho_.trace(); }
  /// max |rho - rho^dagger|.
  [[nodiscard]] double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part.
  [[nodiscard]] double min_eigenvalue() const;

 private:
  int n_cavities_;
  int n_cut_;
  Eigen::MatrixXcd rho_;
};

struct OracleOptions {
  int n_cut = 6;
  /// Largest Hilbert-space dimension (n_cut + 1)^N accepted.
  Eigen::Index max_dimension = 256;
};

/// Single-cavity ladder operator a on {0..n_cut}.
Eigen::SparseMatrix<Complex> ladder_operator(int n_cut);

/// Superoperator acting on column-stacked rho, with the ring Hamiltonian
/// and the decay and pump dissipators of every cavity.
Eigen::SparseMatrix<Complex> liouvillian(const SystemParams& params, int n_cut);

/// Solves L(rho) = 0 with one equation replaced by Tr rho = 1.
/// Throws Error(kCapExceeded) or Error(kSingularSystem).
DensityMatrix steady_density(const SystemParams& params, const OracleOptions& options = {});

/// Tr(rho prod_i a_i^{dagger m_i} a_i^{n_i}); Error(kExponentExceedsCutoff)
/// when an exponent exceeds n_cut.
Complex moment_from_density(const DensityMatrix& rho, const CorrelatorIndex& exponents);

/// Moments extracted from the oracle as a SolutionVector: every
/// single-cavity moment with exponents <= min(n_cut, n_max) plus the
/// adjacent coherence <a^dagger b> when N >= 2. Residual is max |L vec(rho)|.
SolutionVector oracle_solution(const SystemParams& params, const OracleOptions& options = {});

}  // namespace cavisteady
