#include <benchmark/benchmark.h>

#include <cmath>

#include "stochflow/flow_map.hpp"
#include "stochflow/spectral.hpp"
#include "stochflow/transport.hpp"

using namespace stochflow;

namespace {

ScalarField smooth_scalar(const Grid& g) {
  return ScalarField::from_function(g, [](double x, double y) { return std::sin(x) * std::cos(2 * y) + 0.3 * std::cos(x - y); });
}

// a smooth area-preserving map, two shears
FlowMap shear_map(const Grid& g) {
  return FlowMap(VectorField::from_function(g, [](double x, double y) {
                   return std::pair{0.3 * std::sin(y), 0.2 * std::sin(x + 0.3 * std::sin(y))};
                 }),
                 1);
}

}  // namespace

static void BM_RoundTripSpectrum(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const ScalarField f = smooth_scalar(g);
  for (auto _ : state) {
    ScalarField back = to_physical(to_spectrum(f));
    benchmark::DoNotOptimize(back.data());
  }
}
BENCHMARK(BM_RoundTripSpectrum)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_LerayProject(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const VectorField v = gradient(smooth_scalar(g)) + biot_savart(smooth_scalar(g));
  for (auto _ : state) {
    VectorField p = leray_project(v);
    benchmark::DoNotOptimize(p.x.data());
  }
}
BENCHMARK(BM_LerayProject)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_DealiasedAdvection(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const VectorField u = biot_savart(smooth_scalar(g));
  const ScalarField f = smooth_scalar(g);
  for (auto _ : state) {
    ScalarField a = advect(u, f);
    benchmark::DoNotOptimize(a.data());
  }
}
BENCHMARK(BM_DealiasedAdvection)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_PullbackCovector(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const FlowMap A = shear_map(g);
  const VectorField w = biot_savart(smooth_scalar(g));
  for (auto _ : state) {
    VectorField p = pullback_covector(w, A);
    benchmark::DoNotOptimize(p.x.data());
  }
}
BENCHMARK(BM_PullbackCovector)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_WeberReconstruct(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const FlowMap A = shear_map(g);
  const VectorField w = compose_vector(biot_savart(smooth_scalar(g)), A);
  for (auto _ : state) {
    VectorField u = weber_reconstruct(w, A);
    benchmark::DoNotOptimize(u.x.data());
  }
}
BENCHMARK(BM_WeberReconstruct)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
