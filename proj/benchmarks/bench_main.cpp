#include <benchmark/benchmark.h>

#include "fiberpol/bh_ed.hpp"
#include "fiberpol/nlse.hpp"
#include "fiberpol/optics_map.hpp"
#include "fiberpol/sweep.hpp"

using namespace fiberpol;

static void BM_EffectiveParams(benchmark::State& state) {
  const ValidatedConfig cfg = validate_config(OpticalConfig::baseline());
  for (auto _ : state) benchmark::DoNotOptimize(effective_params(cfg));
}
BENCHMARK(BM_EffectiveParams);

static void BM_SweepGrid(benchmark::State& state) {
  GridSpec spec;
  spec.delta_p.count = static_cast<int>(state.range(0));
  spec.omega.count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_grid(spec, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_SweepGrid)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_MottCrossing(benchmark::State& state) {
  OpticalConfig base = OpticalConfig::baseline();
  for (auto _ : state) benchmark::DoNotOptimize(find_mott_crossing(base, 50.0, {0.9, 1.2}));
}
BENCHMARK(BM_MottCrossing);

static void BM_NlseSteps(benchmark::State& state) {
  NlseParams p;
  p.v1_over_er = 5;
  p.g_int = 0.1;
  p.grid_points = static_cast<int>(state.range(0));
  const FieldState psi = uniform_state(p);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(psi, p, 1e-3, 100, 100));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_NlseSteps)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_BuildHamiltonian(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  const FockBasis basis(sites, sites, 4);
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(basis, 1.0, 4.0, true));
  state.counters["dim"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_BuildHamiltonian)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_LanczosGround(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  const SparseMatrix h = build_hamiltonian(FockBasis(sites, sites, 4), 1.0, 4.0, true);
  for (auto _ : state) benchmark::DoNotOptimize(ground_energy(h, EigenMethod::Lanczos));
  state.counters["dim"] = static_cast<double>(h.rows());
}
BENCHMARK(BM_LanczosGround)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
