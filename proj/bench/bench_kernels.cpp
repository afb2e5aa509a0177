// Serial reference vs OpenMP kernels on figure-sized workloads.

#include <benchmark/benchmark.h>

#include "spinbath/bath.hpp"
#include "spinbath/kernels.hpp"
#include "spinbath/single_spin.hpp"
#include "spinbath/two_qubit.hpp"

namespace {

using namespace spinbath;

BathSpec uniform_bath(int n, double g, double alpha) {
  BathSpec b;
  b.n_spins = n;
  b.couplings.assign(n, g);
  b.splittings.assign(n, 1.0);
  b.ising.assign(n, alpha);
  b.beta = 1.0;
  return b;
}

std::vector<RotationTerm> rotation_workload(const BathEnsemble& ens) {
  const auto p0 = initial_bloch_woc(SystemSpec{}, ens.beta);
  std::vector<double> lw;
  for (const auto& t : ens.terms) lw.push_back(log_weight(t, ens.beta));
  const auto w = normalized_weights(lw);
  std::vector<RotationTerm> terms;
  for (std::size_t n = 0; n < w.size(); ++n) terms.push_back({w[n], 2.0 + ens.terms[n].e, 1.0, p0});
  return terms;
}

void BM_BlochSeries(benchmark::State& state, Exec exec, double alpha) {
  const auto ens = build_ensemble(uniform_bath(static_cast<int>(state.range(0)), 0.01, alpha), Engine::collapsed);
  const auto terms = rotation_workload(ens);
  const auto grid = uniform_grid(10.0, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(bloch_series(terms, grid, exec));
  state.counters["classes"] = static_cast<double>(terms.size());
}

void BM_DensitySeries(benchmark::State& state, Exec exec) {
  const auto ens = build_ensemble(uniform_bath(static_cast<int>(state.range(0)), 0.05, 0.0), Engine::collapsed);
  TwoQubitSpec spec;
  spec.kappa = 0.5;
  const auto grid = uniform_grid(10.0, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_2q(spec, ens, grid, true, exec, EvolutionPath::general));
}

}  // namespace

BENCHMARK_CAPTURE(BM_BlochSeries, free_serial, Exec::serial, 0.0)->Arg(50)->Arg(250);
BENCHMARK_CAPTURE(BM_BlochSeries, free_parallel, Exec::parallel, 0.0)->Arg(50)->Arg(250);
BENCHMARK_CAPTURE(BM_BlochSeries, ising_serial, Exec::serial, 0.1)->Arg(50)->Arg(250);
BENCHMARK_CAPTURE(BM_BlochSeries, ising_parallel, Exec::parallel, 0.1)->Arg(50)->Arg(250);
BENCHMARK_CAPTURE(BM_DensitySeries, serial, Exec::serial)->Arg(50);
BENCHMARK_CAPTURE(BM_DensitySeries, parallel, Exec::parallel)->Arg(50);

BENCHMARK_MAIN();
