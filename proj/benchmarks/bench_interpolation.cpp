#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "stochflow/interpolation.hpp"

using namespace stochflow;

namespace {

VectorField smooth_velocity(const Grid& g) {
  return VectorField::from_function(g, [](double x, double y) {
    return std::pair{std::sin(x) * std::cos(2 * y), -0.5 * std::cos(x) * std::sin(2 * y)};
  });
}

}  // namespace

static void BM_BuildVectorInterpolant(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const VectorField u = smooth_velocity(g);
  for (auto _ : state) {
    SpectralInterpolant it(u);
    benchmark::DoNotOptimize(it);
  }
}
BENCHMARK(BM_BuildVectorInterpolant)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

// one velocity evaluation at every node of the grid, shifted off the nodes
static void BM_EvaluateAllNodes(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  const SpectralInterpolant it(smooth_velocity(g));
  std::vector<Point> pts(g.size());
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) pts[g.index(ix, iy)] = {g.coord(ix) + 0.0123, g.coord(iy) - 0.0371};
  double out[2];
  for (auto _ : state) {
    double acc = 0;
    for (const Point& p : pts) {
      it.evaluate(p, out);
      acc += out[0] + out[1];
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_EvaluateAllNodes)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
