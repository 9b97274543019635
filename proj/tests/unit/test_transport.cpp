// Flow maps and the transport algebra.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "stochflow/flow_map.hpp"
#include "stochflow/interpolation.hpp"
#include "stochflow/spectral.hpp"
#include "stochflow/transport.hpp"

using namespace stochflow;
using std::cos;
using std::sin;

namespace {

const Grid g32(32);
const Grid g64(64);

VectorField shear(const Grid& g) {
  return VectorField::from_function(g, [](double, double y) { return std::pair{sin(y), 0.0}; });
}

VectorField tg_velocity(const Grid& g) {
  return VectorField::from_function(g, [](double x, double y) { return std::pair{-sin(x) * cos(y), cos(x) * sin(y)}; });
}

VectorField constant(const Grid& g, double cx, double cy) {
  return VectorField::from_function(g, [=](double, double) { return std::pair{cx, cy}; });
}

double max_node_error(const FlowMap& m, auto&& exact) {
  const Grid& g = m.grid();
  double e = 0;
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      const Point p = m.image(ix, iy);
      const Point q = exact(g.coord(ix), g.coord(iy));
      e = std::max({e, std::abs(p.x - q.x), std::abs(p.y - q.y)});
    }
  return e;
}

std::pair<double, double> det_range(const FlowMap& m) {
  const ScalarField d = m.det_jacobian();
  const auto [lo, hi] = std::minmax_element(d.values().begin(), d.values().end());
  return {*lo, *hi};
}

}  // namespace

TEST_CASE("interpolate_field samples single modes and reproduces nodes") {
  const ScalarField sx = ScalarField::from_function(g32, [](double x, double) { return sin(x); });
  const Point pts[] = {{std::numbers::pi / 2, 1.0}, {0.3, 2.0}, {g32.coord(5), g32.coord(7)}};
  const std::vector<double> v = interpolate_field(sx, pts);
  CHECK(std::abs(v[0] - 1.0) < 1e-13);
  CHECK(std::abs(v[1] - 0.29552020666133955) < 1e-13);
  const ScalarField f = oracle::random_band_limited(g32, 5, 3);
  const Point node[] = {{g32.coord(11), g32.coord(29)}};
  CHECK(std::abs(interpolate_field(f, node)[0] - f(11, 29)) < 1e-12);
}

TEST_CASE("flows of trivial velocities") {
  const auto zero = TimeSampledVelocity::steady(VectorField(g32));
  const FlowMap X = integrate_flow(zero, 0, 1, 0.1);
  CHECK(max_abs(X.displacement()) == 0.0);
  CHECK(max_abs(invert_flow(zero, 0, 1, 0.1).displacement()) == 0.0);

  const auto c = TimeSampledVelocity::steady(constant(g32, 0.3, -0.7));
  const FlowMap Xc = integrate_flow(c, 0, 2, 0.25);
  CHECK(max_node_error(Xc, [](double x, double y) { return Point{x + 0.6, y - 1.4}; }) < 1e-13);
}

TEST_CASE("shear characteristics and their inverse") {
  const auto u = TimeSampledVelocity::steady(shear(g32));
  const FlowMap X = integrate_flow(u, 0, 1, 1e-3);
  CHECK(max_node_error(X, [](double x, double y) { return Point{x + sin(y), y}; }) <= 1e-8);
  const FlowMap A = invert_flow(u, 0, 1, 1e-3);
  CHECK(max_node_error(A, [](double x, double y) { return Point{x - sin(y), y}; }) <= 1e-8);
  CHECK(X.time() == 1.0);
}

TEST_CASE("Taylor-Green flow: composition, measure preservation, inverse consistency") {
  const Grid g128(128);
  const auto u = TimeSampledVelocity::steady(tg_velocity(g128));
  const FlowMap X = integrate_flow(u, 0, 0.5, 0.01);
  const FlowMap A = invert_flow(u, 0, 0.5, 0.01);
  CHECK(inverse_defect(X, A) <= 1e-6);
  CHECK(inverse_defect(X, A) <= 10 * g128.spacing());
  const auto [lo, hi] = det_range(X);
  CHECK(lo >= 1 - 1e-6);
  CHECK(hi <= 1 + 1e-6);
}

TEST_CASE("time-dependent velocity is sampled linearly between stamps") {
  // u(t) = (t, 0): X = x + t^2 / 2, integrated exactly by RK4
  std::vector<VectorField> s;
  for (int j = 0; j <= 4; ++j) s.push_back(constant(g32, 0.25 * j, 0));
  const TimeSampledVelocity u(0, 0.25, s);
  const FlowMap X = integrate_flow(u, 0, 1, 0.25);
  CHECK(max_node_error(X, [](double x, double y) { return Point{x + 0.5, y}; }) < 1e-13);
  CHECK_THROWS_AS(integrate_flow(u, 0, 1.5, 0.25), StructuralError);
}

TEST_CASE("flow leaving the resolvable range is reported") {
  const auto u = TimeSampledVelocity::steady(constant(g32, 5, 0));
  CHECK_THROWS_AS(integrate_flow(u, 0, 1, 0.1, {.max_displacement = 1.0}), NumericalError);
}

TEST_CASE("push-forward of scalars") {
  const ScalarField th = oracle::random_band_limited(g32, 4, 8);
  CHECK(oracle::max_diff(pushforward_scalar(th, FlowMap::identity(g32)), th) < 1e-12);

  const double c = 0.37;
  const auto uc = TimeSampledVelocity::steady(constant(g32, c, 0));
  const FlowMap A = invert_flow(uc, 0, 1, 0.5);
  const ScalarField sx = ScalarField::from_function(g32, [](double x, double y) { return sin(x) * cos(2 * y); });
  const ScalarField shifted =
      ScalarField::from_function(g32, [&](double x, double y) { return sin(x - c) * cos(2 * y); });
  CHECK(oracle::max_diff(pushforward_scalar(sx, A), shifted) < 1e-12);

  const ScalarField th1 = th + ScalarField::from_function(g32, [](double, double) { return 0.8; });
  const auto tg = TimeSampledVelocity::steady(tg_velocity(g32));
  const FlowMap Atg = invert_flow(tg, 0, 0.5, 0.01);
  CHECK(std::abs(pushforward_scalar(th1, Atg).mean() - th1.mean()) <= 1e-6);
}

TEST_CASE("push-forward of vectors") {
  const VectorField v = oracle::random_band_limited_vector(g32, 4, 2);
  const FlowMap I = FlowMap::identity(g32);
  CHECK(oracle::rel_l2(pushforward_vector(v, I, I), v) < 1e-13);

  // a steady field is invariant under its own flow
  const VectorField us = shear(g32);
  const auto u = TimeSampledVelocity::steady(us);
  const FlowMap X = integrate_flow(u, 0, 1, 1e-2), A = invert_flow(u, 0, 1, 1e-2);
  CHECK(oracle::max_diff(pushforward_vector(us, X, A).x, us.x) <= 1e-6);
  CHECK(max_abs(pushforward_vector(us, X, A).y) <= 1e-6);

  // 2-D scalar-curl mechanics: X_# (grad-perp f) = grad-perp (f o A)
  const auto tg = TimeSampledVelocity::steady(tg_velocity(g64));
  const FlowMap Xt = integrate_flow(tg, 0, 0.5, 0.01), At = invert_flow(tg, 0, 0.5, 0.01);
  const ScalarField f = oracle::random_band_limited(g64, 3, 4);
  CHECK(oracle::rel_l2(pushforward_vector(perp_gradient(f), Xt, At), perp_gradient(pushforward_scalar(f, At))) <
        1e-6);
}

TEST_CASE("pull-back of covectors: gradients and duality") {
  const VectorField w = oracle::random_band_limited_vector(g64, 4, 6);
  CHECK(oracle::rel_l2(pullback_covector(w, FlowMap::identity(g64)), w) < 1e-13);

  const auto tg = TimeSampledVelocity::steady(tg_velocity(g64));
  const FlowMap X = integrate_flow(tg, 0, 0.5, 0.01), A = invert_flow(tg, 0, 0.5, 0.01);
  const ScalarField q = oracle::random_band_limited(g64, 3, 9);
  const VectorField pq = pullback_covector(gradient(q), A);
  CHECK(max_abs(curl2d(pq)) <= 1e-8);
  CHECK(oracle::rel_l2(pq, gradient(compose_scalar(q, A))) <= 1e-8);

  const VectorField v = oracle::random_band_limited_vector(g64, 4, 7);
  const double lhs = inner(pullback_covector(w, X), v);
  const double rhs = inner(w, pushforward_vector(v, X, A));
  CHECK(std::abs(lhs - rhs) <= 1e-8 * l2_norm(w) * l2_norm(v));
}

TEST_CASE("Weber reconstruction") {
  const VectorField u = oracle::random_solenoidal(g32, 5, 3);
  const FlowMap I = FlowMap::identity(g32);
  CHECK(oracle::rel_l2(weber_reconstruct(u, I), u) < 1e-13);
  const ScalarField phi = oracle::random_band_limited(g32, 5, 4);
  CHECK(max_abs(weber_reconstruct(gradient(phi), I)) < 1e-13);

  // P commutes with translations
  const auto uc = TimeSampledVelocity::steady(constant(g32, 0.4, -0.2));
  const FlowMap l = integrate_flow(uc, 0, 1, 0.5);
  const VectorField v = oracle::random_band_limited_vector(g32, 5, 5);
  CHECK(oracle::rel_l2(weber_reconstruct(compose_vector(v, l), l), compose_vector(leray_project(v), l)) < 1e-11);
}

TEST_CASE("Cauchy vorticity formula") {
  const ScalarField w0 = oracle::random_band_limited(g32, 4, 12);
  CHECK(oracle::max_diff(cauchy_vorticity(w0, FlowMap::identity(g32)), w0) < 1e-12);

  const auto u = TimeSampledVelocity::steady(shear(g32));
  const FlowMap A = invert_flow(u, 0, 1, 1e-2);
  const ScalarField cy = ScalarField::from_function(g32, [](double, double y) { return -cos(y); });
  CHECK(oracle::max_diff(cauchy_vorticity(cy, A), cy) < 1e-12);

  // curl commutes with covector transport
  const auto tg = TimeSampledVelocity::steady(tg_velocity(g64));
  const FlowMap At = invert_flow(tg, 0, 0.5, 0.01);
  const VectorField wv = oracle::random_band_limited_vector(g64, 4, 13);
  CHECK(oracle::max_diff(curl2d(pullback_covector(wv, At)), cauchy_vorticity(curl2d(wv), At)) <= 1e-6);
}

TEST_CASE("dual transport with forcing") {
  const VectorField w0 = oracle::random_band_limited_vector(g32, 4, 14);
  const auto zero_force = TimeSampledVelocity::steady(VectorField(g32));
  const FlowMap I = FlowMap::identity(g32);
  std::vector<FlowMap> hist{I};
  CHECK(oracle::rel_l2(dual_transport_solution(w0, zero_force, hist, I), w0) < 1e-13);

  // f = 0 along a genuine flow reduces to the pull-back
  const auto tg = TimeSampledVelocity::steady(tg_velocity(g32));
  std::vector<FlowMap> h2;
  for (int k = 0; k <= 4; ++k) h2.push_back(integrate_flow(tg, 0, 0.1 * k, 0.01));
  const FlowMap A = invert_flow(tg, 0, 0.4, 0.01);
  CHECK(oracle::rel_l2(dual_transport_solution(w0, zero_force, h2, A), pullback_covector(w0, A)) < 1e-13);

  // u = 0, constant force c: w0 + t c
  std::vector<FlowMap> h3;
  for (int k = 0; k <= 5; ++k) h3.push_back(FlowMap::identity(g32, 0.2 * k));
  const auto force = TimeSampledVelocity::steady(constant(g32, 0.5, -1.5));
  const VectorField got = dual_transport_solution(w0, force, h3, FlowMap::identity(g32, 1.0));
  CHECK(oracle::rel_l2(got, w0 + constant(g32, 0.5, -1.5)) < 1e-13);
}

TEST_CASE("curl of Lie-transported fields") {
  const VectorField v0 = oracle::random_band_limited_vector(g32, 4, 21);
  const auto zero = TimeSampledVelocity::steady(VectorField(g32));
  CHECK(oracle::max_diff(lie_transported_current(v0, zero, 0.5, 0.1), curl2d(v0)) < 1e-12);

  // v0 = u steady: the current is the transported vorticity
  const VectorField us = tg_velocity(g32);
  const auto tg = TimeSampledVelocity::steady(us);
  const FlowMap A = invert_flow(tg, 0, 0.3, 0.01);
  const ScalarField J = lie_transported_current(us, tg, 0.3, 0.01);
  CHECK(oracle::rel_l2(J, cauchy_vorticity(curl2d(us), A)) < 1e-5);

  // brute force: curl of the directly pushed-forward field, unit-speed velocity
  VectorField u = oracle::random_solenoidal(g32, 3, 22);
  u *= 1.0 / max_abs(u);
  const auto ur = TimeSampledVelocity::steady(u);
  const double t = 0.1, dt = 0.005;
  const FlowMap X = integrate_flow(ur, 0, t, dt), Ar = invert_flow(ur, 0, t, dt);
  const VectorField w = oracle::random_solenoidal(g32, 3, 23);
  CHECK(oracle::rel_l2(lie_transported_current(w, ur, t, dt), curl2d(pushforward_vector(w, X, Ar))) <= 1e-5);
}

TEST_CASE("back-to-label maps depend stably on the velocity") {
  const VectorField u = tg_velocity(g32);
  const VectorField dir = oracle::random_solenoidal(g32, 2, 31);
  const FlowMap A = invert_flow(TimeSampledVelocity::steady(u), 0, 0.5, 0.01);
  double prev = 0;
  for (double delta : {1e-2, 5e-3, 2.5e-3}) {
    VectorField up = u;
    up.axpy(delta, dir);
    const FlowMap Ap = invert_flow(TimeSampledVelocity::steady(up), 0, 0.5, 0.01);
    const double d = l2_norm(Ap.displacement() - A.displacement());
    MESSAGE("delta " << delta << " |A - A~| " << d << " ratio " << (prev > 0 ? d / prev : 0.0));
    if (prev > 0) CHECK(d <= 0.5 * prev);
    prev = d;
  }
}
