#include <benchmark/benchmark.h>

#include <cmath>

#include "stochflow/ensemble.hpp"
#include "stochflow/lagrangian.hpp"
#include "stochflow/parallel.hpp"
#include "stochflow/spectral.hpp"

using namespace stochflow;

namespace {

VectorField smooth_velocity(const Grid& g) {
  return biot_savart(ScalarField::from_function(
      g, [](double x, double y) { return 2 * std::sin(x) * std::sin(y) + 0.8 * std::cos(2 * x + y); }));
}

}  // namespace

static void BM_SamplePaths(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Ensemble e = sample_paths(m, 1.0, 0.01, 0.01, 42);
    benchmark::DoNotOptimize(e.paths().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePaths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_StochasticFlowPair(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const auto u = TimeSampledVelocity::steady(smooth_velocity(g));
  const Ensemble e = sample_paths(1, 0.25, 0.025, 0.01, 1);
  for (auto _ : state) {
    FlowPair f = stochastic_flow_pair(u, e.path(0), 0.25, 0.05);
    benchmark::DoNotOptimize(f.forward.displacement().x.data());
  }
}
BENCHMARK(BM_StochasticFlowPair)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

// one full fixed-point solve; the worker count is the second argument
static void BM_LagrangianSolve(benchmark::State& state) {
  const Grid g(32);
  const auto m = static_cast<std::size_t>(state.range(0));
  set_worker_count(static_cast<std::size_t>(state.range(1)));
  const VectorField u0 = smooth_velocity(g);
  const Ensemble e = sample_paths(m, 0.2, 0.05, 0.01, 7);
  for (auto _ : state) {
    LagrangianResult r = lagrangian_window_solve(ModelSpec::navier_stokes(0.01), FluidState::make(0, u0), 0.2, 0.1, e);
    benchmark::DoNotOptimize(r.trajectory.back().u.x.data());
  }
  set_worker_count(0);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LagrangianSolve)->Args({64, 1})->Args({256, 1})->Args({256, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
