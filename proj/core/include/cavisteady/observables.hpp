#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavisteady/eom.hpp"
#include "cavisteady/steady_solver.hpp"

namespace cavisteady {

inline constexpr double kPopulationFloor = 1e-12;
inline constexpr double kImaginaryWarning = 1e-6;

struct Observables {
  double n_a = 0.0;
  /// Zero-delay coherence; may be negative for truncated perturbative series.
  std::optional<double> g2;
  /// <a^dagger b> for adjacent cavities, when the solution carries it.
  std::optional<Complex> nn_coherence;
  Complex moment_n{};
  Complex moment_g2{};
  std::vector<std::string> warnings;
};

/// Mean population Re<a^dagger a>. Throws Error(kMissingMoment).
double population(const SolutionVector& v);

/// Re<a^dagger2 a2> / n_a^2. Throws Error(kMissingMoment) when n_max < 2
/// and Error(kPopulationTooSmall) when n_a <= kPopulationFloor.
double coherence_g2(const SolutionVector& v);

/// The canonical {(1,0),(0,1),0,...} entry; nullopt for N = 1 or when absent.
std::optional<Complex> nearest_neighbour_coherence(const SolutionVector& v);

Observables compute_observables(const SolutionVector& v, bool with_g2 = true);

}  // namespace cavisteady
