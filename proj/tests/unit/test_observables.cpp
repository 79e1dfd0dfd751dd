#include <doctest.h>

#include "cavisteady/eom.hpp"
#include "cavisteady/errors.hpp"
#include "cavisteady/observables.hpp"
#include "cavisteady/steady_solver.hpp"

using namespace cavisteady;

namespace {
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

SolutionVector singles(int n, int n_max, Complex pop, Complex pair_moment) {
  std::vector<CorrelatorIndex> rows{CorrelatorIndex::single(n, {1, 1}), CorrelatorIndex::single(n, {2, 2})};
  Eigen::VectorXcd vals(2);
  vals << pop, pair_moment;
  return SolutionVector(make(n, n_max, 0, 6, 0, 0.1), Method::kExact, rows, vals, 0.0);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoFailure;
}
}  // namespace

TEST_CASE("g2 arithmetic") {
  const auto v = singles(1, 2, 0.1, 0.02);
  CHECK(population(v) == doctest::Approx(0.1));
  CHECK(coherence_g2(v) == doctest::Approx(2.0));
  CHECK_FALSE(nearest_neighbour_coherence(v));
}

TEST_CASE("thermal light") {
  const auto v = solve_steady(assemble_system(make(1, 3, 0.2, 6, 0, 0, 0.3)));
  const auto obs = compute_observables(v);
  CHECK(obs.n_a == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(*obs.g2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("coherent light") {
  const auto v = solve_steady(assemble_system(make(1, 8, 0, 0, 0, 0.1)));
  CHECK(std::abs(coherence_g2(v) - 1.0) < 1e-6);
}

TEST_CASE("observable errors") {
  CHECK(code_of([] { (void)coherence_g2(singles(1, 2, 1e-14, 0.0)); }) == ErrorCode::kPopulationTooSmall);
  const auto v1 = solve_steady(assemble_system(make(1, 1, 0, 6, 0, 0.1)));
  CHECK(code_of([&] { (void)coherence_g2(v1); }) == ErrorCode::kMissingMoment);
  const auto obs = compute_observables(v1, false);
  CHECK_FALSE(obs.g2);
  CHECK(obs.n_a > 0);
}

TEST_CASE("negative g2 is reported as computed") {
  CHECK(coherence_g2(singles(1, 2, 0.1, -0.005)) == doctest::Approx(-0.5));
}

TEST_CASE("imaginary parts above tolerance are flagged") {
  const auto obs = compute_observables(singles(1, 2, Complex(0.1, 1e-3), 0.02));
  CHECK_FALSE(obs.warnings.empty());
}

TEST_CASE("nearest-neighbour coherence on a ring") {
  const auto v = solve_steady(assemble_system(make(3, 2, 0, 6, 0.2, 0.4)));
  const auto nn = nearest_neighbour_coherence(v);
  REQUIRE(nn);
  CHECK(*nn == v.at({{1, 0}, {0, 1}, {0, 0}}));
  CHECK(*nn == v.at({{0, 0}, {1, 0}, {0, 1}}));
}
