#include <benchmark/benchmark.h>

#include "cavisteady/eom.hpp"
#include "cavisteady/perturbative.hpp"
#include "cavisteady/steady_solver.hpp"

using namespace cavisteady;

namespace {
SystemParams fig1(int n, int n_max) {
  ParamRecord r;
  r.u = 6;
  r.j = 0.3;
  r.omega = 0.5;
  r.n_cavities = n;
  r.n_max = n_max;
  return validate_params(r);
}
}  // namespace

static void BM_Canonicalize(benchmark::State& state) {
  const CorrelatorIndex idx{{0, 1}, {2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 0}};
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(idx));
}
BENCHMARK(BM_Canonicalize);

static void BM_EnumerateCanonical(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_canonical(4, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EnumerateCanonical)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_AssembleFull(benchmark::State& state) {
  const auto p = fig1(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(p));
}
BENCHMARK(BM_AssembleFull)->Unit(benchmark::kMillisecond);

static void BM_SolveFull(benchmark::State& state) {
  const auto sys = assemble_system(fig1(4, 2));
  for (auto _ : state) benchmark::DoNotOptimize(solve_steady(sys));
}
BENCHMARK(BM_SolveFull)->Unit(benchmark::kMillisecond);

static void BM_SolveClosure(benchmark::State& state) {
  const auto p = fig1(4, static_cast<int>(state.range(0)));
  AssemblyOptions opt;
  opt.seeds = observable_seeds(4, p.n_max());
  for (auto _ : state) benchmark::DoNotOptimize(solve_steady(assemble_system(p, opt)));
}
BENCHMARK(BM_SolveClosure)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_Perturbative(benchmark::State& state) {
  const auto p = fig1(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_perturbative(p, 2));
}
BENCHMARK(BM_Perturbative)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
