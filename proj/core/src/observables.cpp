#include "cavisteady/observables.hpp"

#include <cmath>
#include <cstdio>

#include "cavisteady/errors.hpp"

namespace cavisteady {

namespace {

Complex required(const SolutionVector& v, PairIndex pair) {
  if (auto x = v.single(pair)) return *x;
  throw Error(ErrorCode::kMissingMoment, "solution lacks <a^dag" + std::to_string(pair.m) + " a" +
                                             std::to_string(pair.n) + ">; raise n_max");
}

void check_real(const char* name, Complex x, std::vector<std::string>& warnings) {
  if (std::abs(x.imag()) > kImaginaryWarning) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s has imaginary residue %.3g", name, x.imag());
    warnings.emplace_back(buf);
  }
}

}  // namespace

double population(const SolutionVector& v) { return required(v, {1, 1}).real(); }

double coherence_g2(const SolutionVector& v) {
  const double n = population(v);
  const Complex num = required(v, {2, 2});
  if (!(n > kPopulationFloor)) {
    throw Error(ErrorCode::kPopulationTooSmall, "n_a = " + std::to_string(n) + " too small for g2");
  }
  return num.real() / (n * n);
}

std::optional<Complex> nearest_neighbour_coherence(const SolutionVector& v) {
  const int n_cav = v.params().n_cavities();
  if (n_cav < 2) return std::nullopt;
  auto idx = CorrelatorIndex::identity(n_cav);
  idx[0] = {1, 0};
  idx[1] = {0, 1};
  return v.value(idx);
}

Observables compute_observables(const SolutionVector& v, bool with_g2) {
  Observables out;
  out.moment_n = required(v, {1, 1});
  out.n_a = out.moment_n.real();
  check_real("n_a", out.moment_n, out.warnings);
  if (with_g2) {
    out.moment_g2 = required(v, {2, 2});
    check_real("<a^dag2 a2>", out.moment_g2, out.warnings);
    out.g2 = coherence_g2(v);
  }
  out.nn_coherence = nearest_neighbour_coherence(v);
  return out;
}

}  // namespace cavisteady
