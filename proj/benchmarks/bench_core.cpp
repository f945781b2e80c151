#include <benchmark/benchmark.h>

#include <random>

#include "cuspwave/norms.hpp"
#include "cuspwave/propagate.hpp"
#include "cuspwave/radial.hpp"
#include "cuspwave/semiclassics.hpp"

using namespace cuspwave;

static void BM_Eigendecompose(benchmark::State& state) {
  const auto grid = RadialGrid::make(0.0, 20.0, static_cast<std::size_t>(state.range(0)));
  const auto op = discretize(WarpProfile::exp_cusp(), 1.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(op).values.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigendecompose)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);

static void BM_EigendecomposeWindow(benchmark::State& state) {
  const auto grid = RadialGrid::make(0.0, 20.0, static_cast<std::size_t>(state.range(0)));
  const auto op = discretize(WarpProfile::exp_cusp(), 1.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(op, SpectralWindow{100.0, 400.0}).values.data());
}
BENCHMARK(BM_EigendecomposeWindow)->RangeMultiplier(2)->Range(512, 8192)->Unit(benchmark::kMillisecond);

namespace {

struct EvolveFixture {
  RadialGrid grid;
  std::vector<Mode> modes;
  std::vector<EigenSystem> es;
  CuspState u;
  explicit EvolveFixture(std::size_t n) : grid(RadialGrid::make(0.0, 12.0, n)) {
    modes = modes_up_to(AngularManifold::unit_circle(), 3.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    u = CuspState::zero(modes, grid);
    for (const auto& m : modes) {
      es.push_back(eigendecompose(discretize(WarpProfile::exp_cusp(), m.mu, grid)));
      for (auto& x : u.u[m.k]) x = {g(rng), g(rng)};
    }
  }
};

}  // namespace

static void BM_Evolve(benchmark::State& state) {
  EvolveFixture f(static_cast<std::size_t>(state.range(0)));
  double t = 0.0;
  for (auto _ : state) {
    t += 0.01;
    benchmark::DoNotOptimize(evolve(f.u, f.es, t, EvolutionKind::Schrodinger).u[0].data());
  }
}
BENCHMARK(BM_Evolve)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_Lq(benchmark::State& state) {
  EvolveFixture f(static_cast<std::size_t>(state.range(0)));
  LqEvaluator ev(WarpProfile::exp_cusp(), AngularManifold::unit_circle(), f.modes, f.grid, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(ev(f.u));
}
BENCHMARK(BM_Lq)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

static void BM_Quantize(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto grid = RadialGrid::with_step(0.0, 6.0, h / 3);
  const auto a = principal_symbol(WarpProfile::exp_cusp(), h, 0.125 / h, KineticSymbol::Lattice, h / grid.dr(),
                                  SpectralCutoff::wide());
  std::size_t rb = 0;
  while (grid.node(rb) <= 2.0) ++rb;
  for (auto _ : state) benchmark::DoNotOptimize(quantize(a, h, 1.9, grid, rb, grid.n).data());
}
BENCHMARK(BM_Quantize)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Flow(benchmark::State& state) {
  FlowSetup st;
  st.h = 1.0 / 64;
  st.mu = 1.0;
  st.kind = HamiltonianKind::HalfWave;
  for (auto _ : state) benchmark::DoNotOptimize(flow(st, std::log(32.0), -0.5, 0.5, default_flow_steps(0.5)).back().x);
}
BENCHMARK(BM_Flow)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
