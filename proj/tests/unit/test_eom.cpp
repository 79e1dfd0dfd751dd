#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cavisteady/density_oracle.hpp"
#include "cavisteady/eom.hpp"
#include "cavisteady/errors.hpp"

using namespace cavisteady;

namespace {
constexpr Complex kI{0.0, 1.0};

SystemParams make(int n, int n_max, double delta, double u, double j, double omega, double n_thermal = 0) {
  ParamRecord r;
  r.delta = delta;
  r.u = u;
  r.j = j;
  r.omega = omega;
  r.n_thermal = n_thermal;
  r.n_cavities = n;
  r.n_max = n_max;
  return validate_params(r);
}

// Sums coefficients per (target, origin).
Complex coefficient(const std::vector<EomTerm>& terms, const CorrelatorIndex& target, Origin origin) {
  Complex sum{};
  for (const auto& t : terms) {
    if (t.target == target && t.origin == origin) sum += t.coefficient;
  }
  return sum;
}

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

// prod_i a_i^{dagger m_i} a_i^{n_i} on the truncated ladder, cavity 0 leftmost.
Eigen::MatrixXcd moment_operator(const CorrelatorIndex& idx, int n_cut) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_cut + 1, n_cut + 1);
  for (int k = 1; k <= n_cut; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXcd ad = a.adjoint();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& p : idx.pairs()) {
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Identity(n_cut + 1, n_cut + 1);
    for (int k = 0; k < p.m; ++k) f = f * ad;
    for (int k = 0; k < p.n; ++k) f = f * a;
    out = kron(out, f);
  }
  return out;
}
}  // namespace

TEST_CASE("terms of <a> on the four-ring") {
  const auto p = make(4, 2, 0.4, 6, 0.3, 0.5);
  const CorrelatorIndex a{{0, 1}, {0, 0}, {0, 0}, {0, 0}};
  const auto terms = derivative_terms(a, p);
  CHECK(close(coefficient(terms, a, Origin::kDetuning), -kI * 0.4));
  CHECK(close(coefficient(terms, a, Origin::kDecay), -0.5));
  CHECK(close(coefficient(terms, CorrelatorIndex::identity(4), Origin::kDrive), -kI * 0.5));
  CHECK(close(coefficient(terms, {{1, 2}, {0, 0}, {0, 0}, {0, 0}}, Origin::kKerrRaise), -kI * 6.0));
  CHECK(close(coefficient(terms, {{0, 0}, {0, 1}, {0, 0}, {0, 0}}, Origin::kHop), -kI * 0.3));
  CHECK(close(coefficient(terms, {{0, 0}, {0, 0}, {0, 0}, {0, 1}}, Origin::kHop), -kI * 0.3));
  CHECK(terms.size() == 6);
}

TEST_CASE("pump lowers the population to the identity") {
  const auto p = make(4, 2, 0, 6, 0.3, 0.5, 0.3);
  const auto terms = derivative_terms({{1, 1}, {0, 0}, {0, 0}, {0, 0}}, p);
  CHECK(close(coefficient(terms, CorrelatorIndex::identity(4), Origin::kPumpLower), 0.3));
  CHECK(close(coefficient(terms, {{1, 1}, {0, 0}, {0, 0}, {0, 0}}, Origin::kPumpDiagonal), 0.3));
  CHECK(close(coefficient(terms, {{1, 1}, {0, 0}, {0, 0}, {0, 0}}, Origin::kDecay), -1.3));
}

TEST_CASE("appendix-verbatim mode drops the pump diagonal") {
  ParamRecord r;
  r.n_thermal = 0.3;
  r.pump_diagonal = PumpDiagonal::kAppendixVerbatim;
  const auto terms = derivative_terms(CorrelatorIndex{{1, 1}}, validate_params(r));
  CHECK(close(coefficient(terms, CorrelatorIndex{{1, 1}}, Origin::kPumpDiagonal), 0.0));
}

TEST_CASE("generated terms respect the truncation and symmetries") {
  const auto p = make(4, 2, 0.7, 6, 0.3, 0.5, 0.2);
  for (const auto& idx : enumerate_canonical(4, 2)) {
    const auto terms = derivative_terms(idx, p);
    const auto conj_terms = derivative_terms(idx.conjugate(), p);
    REQUIRE(terms.size() == conj_terms.size());
    for (const auto& t : terms) {
      CHECK(t.target.max_exponent() <= 2);
      CHECK(t.coefficient != Complex{});
      CHECK(close(coefficient(conj_terms, t.target.conjugate(), t.origin), std::conj(coefficient(terms, t.target, t.origin))));
      if (t.origin == Origin::kHop) {
        CHECK(t.target.total_order() == idx.total_order());
        const Complex mult = t.coefficient / (kI * 0.3);
        CHECK(std::abs(mult.imag()) < 1e-12);
        CHECK(std::abs(mult.real() - std::round(mult.real())) < 1e-12);
      }
    }
  }
}

TEST_CASE("without drive the equations conserve m - n") {
  const auto p = make(3, 2, 0.7, 6, 0.3, 0.0, 0.2);
  for (const auto& idx : enumerate_canonical(3, 2)) {
    int diff = 0;
    for (const auto& q : idx.pairs()) diff += q.m - q.n;
    for (const auto& t : derivative_terms(idx, p)) {
      int d = 0;
      for (const auto& q : t.target.pairs()) d += q.m - q.n;
      CHECK(d == diff);
    }
  }
}

TEST_CASE("full four-ring system") {
  const auto p = make(4, 2, 0, 6, 0.3, 0.5);
  const auto sys = assemble_system(p);
  CHECK(sys.dimension() == 1034);
  CHECK(sys.matrix().rows() == 1034);
  CHECK(sys.matrix().cols() == 1034);
  int nonzero = 0;
  for (Eigen::Index r = 0; r < sys.rhs().size(); ++r) {
    if (sys.rhs()[r] != Complex{}) ++nonzero;
  }
  CHECK(nonzero == 2);
  const auto ra = sys.row_of({{0, 1}, {0, 0}, {0, 0}, {0, 0}});
  const auto rad = sys.row_of({{0, 0}, {0, 0}, {1, 0}, {0, 0}});
  REQUIRE(ra);
  REQUIRE(rad);
  CHECK(close(sys.rhs()[static_cast<Eigen::Index>(*ra)], -kI * 0.5));
  CHECK(close(sys.rhs()[static_cast<Eigen::Index>(*rad)], kI * 0.5));
}

TEST_CASE("single cavity <a> row") {
  const auto p = make(1, 2, 0.4, 6, 0, 0.5);
  const auto sys = assemble_system(p);
  CHECK(sys.dimension() == 8);
  const auto ra = *sys.row_of(CorrelatorIndex{{0, 1}});
  const auto rk = *sys.row_of(CorrelatorIndex{{1, 2}});
  const Eigen::MatrixXcd m(sys.matrix());
  CHECK(close(m(static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(ra)), -kI * 0.4 - 0.5));
  CHECK(close(m(static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(rk)), -kI * 6.0));
}

TEST_CASE("system dump lists every tagged entry") {
  const auto sys = assemble_system(make(1, 1, 0.4, 6, 0, 0.5));
  std::ostringstream os;
  write_system_dump(sys, os);
  std::istringstream is(os.str());
  std::string line;
  std::size_t lines = 0;
  int identity_entries = 0;
  while (std::getline(is, line)) {
    ++lines;
    std::istringstream ls(line);
    std::string row, col, re, im, origin;
    ls >> row >> col >> re >> im >> origin;
    CHECK_FALSE(origin.empty());
    if (col == "I") ++identity_entries;
  }
  CHECK(lines == sys.entries().size());
  CHECK(identity_entries == 2);
}

TEST_CASE("oversized full systems are refused") {
  CHECK_THROWS_AS(assemble_system(make(4, 8, 0, 6, 0.3, 0.5)), Error);
  try {
    (void)assemble_system(make(4, 8, 0, 6, 0.3, 0.5));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionOverflow);
  }
}

TEST_CASE("closure rows match the full system") {
  const auto p = make(3, 2, 0.2, 6, 0.3, 0.5, 0.1);
  const auto full = assemble_system(p);
  AssemblyOptions opt;
  opt.seeds = observable_seeds(3, 2);
  const auto closed = assemble_system(p, opt);
  CHECK(closed.dimension() <= full.dimension());
  const Eigen::MatrixXcd mf(full.matrix());
  const Eigen::MatrixXcd mc(closed.matrix());
  for (std::size_t r = 0; r < closed.dimension(); ++r) {
    const auto fr = static_cast<Eigen::Index>(*full.row_of(closed.rows()[r]));
    CHECK(close(closed.rhs()[static_cast<Eigen::Index>(r)], full.rhs()[fr]));
    for (std::size_t c = 0; c < closed.dimension(); ++c) {
      const auto fc = static_cast<Eigen::Index>(*full.row_of(closed.rows()[c]));
      CHECK(close(mc(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), mf(fr, fc)));
    }
    CHECK(close(mf.row(fr).sum(), mc.row(static_cast<Eigen::Index>(r)).sum(), 1e-10));
  }
}

TEST_CASE("equations of motion agree with the Liouvillian") {
  // With rho confined to at most one photon per cavity and a roomy Fock
  // cutoff, Tr(O L rho) is free of truncation effects.
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (int n : {1, 2, 3}) {
    CAPTURE(n);
    const int n_cut = 4;
    const auto p = make(n, 6, 0.3, 2.5, 0.4, 0.7, 0.2);
    const Eigen::Index dim = static_cast<Eigen::Index>(std::pow(n_cut + 1, n));
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        bool low = true;
        for (Eigen::Index a = i, b = j, k = 0; k < n; ++k, a /= n_cut + 1, b /= n_cut + 1) {
          if (a % (n_cut + 1) > 1 || b % (n_cut + 1) > 1) low = false;
        }
        if (low) rho(i, j) = Complex(g(rng), g(rng));
      }
    }
    const Eigen::SparseMatrix<Complex> l = liouvillian(p, n_cut);
    const Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(rho.data(), dim * dim);
    const Eigen::VectorXcd lvec = l * vec;
    const Eigen::MatrixXcd lrho = Eigen::Map<const Eigen::MatrixXcd>(lvec.data(), dim, dim);

    for (const auto& idx : enumerate_canonical(n, 2)) {
      const Complex lhs = (moment_operator(idx, n_cut) * lrho).trace();
      Complex rhs{};
      for (const auto& t : derivative_terms(idx, p)) rhs += t.coefficient * (moment_operator(t.target, n_cut) * rho).trace();
      CAPTURE(idx.to_string());
      CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
    }
  }
}
