// Grid, field, transform and multiplier checks.

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "stochflow/interpolation.hpp"
#include "stochflow/spectral.hpp"

using namespace stochflow;
using std::cos;
using std::sin;

namespace {

const Grid g32(32);
const Grid g64(64);

VectorField tg_velocity(const Grid& g) {
  return VectorField::from_function(g, [](double x, double y) {
    return std::pair{-sin(x) * cos(y), cos(x) * sin(y)};
  });
}

}  // namespace

TEST_CASE("grid accepts powers of two from 16 and rejects the rest") {
  CHECK_NOTHROW(Grid(16));
  CHECK_NOTHROW(Grid(128));
  CHECK_THROWS_AS(Grid(8), StructuralError);
  CHECK_THROWS_AS(Grid(48), StructuralError);
  CHECK(g64.spacing() == doctest::Approx(2 * std::numbers::pi / 64).epsilon(1e-15));
}

TEST_CASE("mixing grids is a structural error") {
  ScalarField a(g32), b(g64);
  CHECK_THROWS_AS(a += b, StructuralError);
  CHECK_THROWS_AS(VectorField(ScalarField(g32), ScalarField(g64)), StructuralError);
  CHECK_THROWS_AS(ScalarField(g32, std::vector<double>(10)), StructuralError);
}

TEST_CASE("transform round trip and single-mode coefficient") {
  const ScalarField f = oracle::random_band_limited(g32, 8, 1);
  CHECK(oracle::max_diff(to_physical(to_spectrum(f)), f) < 1e-13);
  const Spectrum s = to_spectrum(ScalarField::from_function(g32, [](double x, double) { return sin(x); }));
  // sin x = (e^{ix} - e^{-ix}) / 2i
  CHECK(std::abs(s.at(0, 1) - cplx(0, -0.5)) < 1e-15);
}

TEST_CASE("Parseval: grid L2 norm equals coefficient norm") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField f = oracle::random_band_limited(g64, 20, seed);
    const double a = inner(f, f), b = spectral_energy(to_spectrum(f));
    CHECK(std::abs(a - b) <= 1e-12 * a);
  }
}

TEST_CASE("multiplier symbols") {
  const ScalarField sx = ScalarField::from_function(g32, [](double x, double) { return sin(x); });
  CHECK(oracle::max_diff(apply_multiplier(SpectralMultiplier::fractional_laplacian(1), sx), sx) < 1e-13);

  ScalarField c(g32);
  for (double& v : c.values()) v = 3.5;
  CHECK(max_abs(apply_multiplier(SpectralMultiplier::inverse_laplacian(), c)) < 1e-15);
  CHECK(max_abs(apply_multiplier(SpectralMultiplier::fractional_laplacian(-0.5), c)) < 1e-15);

  // mode (1,1) with nu = 0.5, dt = 1: exp(-0.5 * 2 * 1)
  const ScalarField m11 = ScalarField::from_function(g32, [](double x, double y) { return cos(x + y); });
  const ScalarField h = apply_multiplier(SpectralMultiplier::heat_factor(0.5, 1.0), m11);
  CHECK(oracle::max_diff(h, std::exp(-1.0) * m11) < 1e-15);

  // inverse Laplacian of cos 2x is -cos(2x)/4
  const ScalarField c2 = ScalarField::from_function(g32, [](double x, double) { return cos(2 * x); });
  CHECK(oracle::max_diff(apply_multiplier(SpectralMultiplier::inverse_laplacian(), c2), -0.25 * c2) < 1e-15);
}

TEST_CASE("fractional powers invert each other on mean-free fields") {
  for (double s : {0.25, 0.5, 1.0, 1.7}) {
    ScalarField f = oracle::random_band_limited(g64, 30, 7);
    const ScalarField r = apply_multiplier(SpectralMultiplier::fractional_laplacian(-s),
                                           apply_multiplier(SpectralMultiplier::fractional_laplacian(s), f));
    CHECK(oracle::rel_l2(r, f) < 1e-12);
  }
}

TEST_CASE("non-finite input is a numerical error") {
  ScalarField f(g32);
  f(3, 4) = std::nan("");
  CHECK_THROWS_AS(apply_multiplier(SpectralMultiplier::inverse_laplacian(), f), NumericalError);
  CHECK_THROWS_AS(biot_savart(f), NumericalError);
  VectorField v(g32);
  v.y(1, 1) = INFINITY;
  CHECK_THROWS_AS(leray_project(v), NumericalError);
}

TEST_CASE("vector symbols are rejected where they make no sense") {
  ScalarField f(g32);
  CHECK_THROWS_AS(apply_multiplier(SpectralMultiplier::leray(), f), StructuralError);
  CHECK_THROWS_AS(apply_multiplier(SpectralMultiplier::biot_savart(), VectorField(g32)), StructuralError);
}

TEST_CASE("Leray projection closed-form cases") {
  const VectorField grad = VectorField::from_function(g32, [](double x, double) { return std::pair{sin(x), 0.0}; });
  CHECK(max_abs(leray_project(grad)) < 1e-15);

  const VectorField tg = tg_velocity(g32);
  CHECK(oracle::rel_l2(leray_project(tg), tg) < 1e-15);

  const VectorField mix = VectorField::from_function(g32, [](double x, double y) { return std::pair{sin(x) + sin(y), 0.0}; });
  const VectorField want = VectorField::from_function(g32, [](double, double y) { return std::pair{sin(y), 0.0}; });
  CHECK(oracle::rel_l2(leray_project(mix), want) < 1e-15);

  // through the generic multiplier entry point as well
  CHECK(oracle::rel_l2(apply_multiplier(SpectralMultiplier::leray(), mix), want) < 1e-15);
}

TEST_CASE("Leray projection properties on random fields") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const VectorField v = oracle::random_band_limited_vector(g64, 20, seed);
    const VectorField p = leray_project(v);
    CHECK(oracle::rel_l2(leray_project(p), p) < 1e-12);
    CHECK(l2_norm(divergence(p)) <= 1e-10 * l2_norm(p));
    const VectorField q = v - p;
    CHECK(std::abs(inner(p, q)) <= 1e-10 * l2_norm(p) * l2_norm(q));
    CHECK(std::abs(p.x.mean()) < 1e-14);
    // commutes with derivatives
    const VectorField dv(partial_x(v.x), partial_x(v.y));
    const VectorField pd = leray_project(dv);
    const VectorField dp(partial_x(p.x), partial_x(p.y));
    CHECK(oracle::rel_l2(pd, dp) < 1e-12);
    // P grad = 0
    CHECK(l2_norm(leray_project(gradient(v.x))) <= 1e-12 * l2_norm(gradient(v.x)));
  }
}

TEST_CASE("Biot-Savart law") {
  CHECK(max_abs(biot_savart(ScalarField(g32))) == 0.0);
  const ScalarField w = ScalarField::from_function(g32, [](double x, double y) { return -2 * sin(x) * sin(y); });
  CHECK(oracle::rel_l2(biot_savart(w), tg_velocity(g32)) < 1e-14);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField om = oracle::random_band_limited(g64, 25, seed);
    const VectorField u = biot_savart(om);
    CHECK(oracle::rel_l2(curl2d(u), om) < 1e-12);
    CHECK(l2_norm(divergence(u)) <= 1e-12 * l2_norm(u));
    const VectorField v = oracle::random_band_limited_vector(g64, 20, seed + 100);
    CHECK(oracle::rel_l2(biot_savart(curl2d(v)), leray_project(v)) < 1e-12);
  }

  // a mean is silently dropped
  ScalarField shifted = w;
  for (double& x : shifted.values()) x += 2.0;
  CHECK(oracle::rel_l2(biot_savart(shifted), tg_velocity(g32)) < 1e-14);
}

TEST_CASE("differential operators") {
  const VectorField cy = VectorField::from_function(g32, [](double, double y) { return std::pair{cos(y), 0.0}; });
  const ScalarField sy = ScalarField::from_function(g32, [](double, double y) { return sin(y); });
  CHECK(oracle::max_diff(curl2d(cy), sy) < 1e-14);
  CHECK(max_abs(divergence(tg_velocity(g32))) < 1e-14);
  const ScalarField sxsy = ScalarField::from_function(g32, [](double x, double y) { return sin(x) * sin(y); });
  CHECK(oracle::rel_l2(perp_gradient(sxsy), tg_velocity(g32)) < 1e-14);

  const ScalarField f = oracle::random_band_limited(g64, 25, 3);
  CHECK(max_abs(curl2d(gradient(f))) <= 1e-12 * max_abs(f));
  CHECK(max_abs(divergence(perp_gradient(f))) <= 1e-12 * max_abs(f));
}

TEST_CASE("norm identity for divergence-free fields") {
  const VectorField u = biot_savart(oracle::random_band_limited(g64, 20, 9));
  const double grad2 = inner(gradient(u.x), gradient(u.x)) + inner(gradient(u.y), gradient(u.y));
  const ScalarField w = curl2d(u);
  CHECK(std::abs(grad2 - inner(w, w)) <= 1e-10 * grad2);
}

TEST_CASE("Helmholtz decomposition") {
  const VectorField tg = tg_velocity(g32);
  HelmholtzParts p = helmholtz_decompose(tg);
  CHECK(oracle::rel_l2(p.solenoidal, tg) < 1e-15);
  CHECK(max_abs(p.gradient) < 1e-15);

  const VectorField gc = VectorField::from_function(g32, [](double x, double) { return std::pair{-sin(x), 0.0}; });
  p = helmholtz_decompose(gc);
  CHECK(max_abs(p.solenoidal) < 1e-15);
  CHECK(oracle::rel_l2(p.gradient, gc) < 1e-15);

  const VectorField mix = VectorField::from_function(g32, [](double x, double y) { return std::pair{sin(x) + sin(y), 0.0}; });
  p = helmholtz_decompose(mix);
  CHECK(oracle::rel_l2(p.solenoidal, VectorField::from_function(g32, [](double, double y) { return std::pair{sin(y), 0.0}; })) < 1e-15);
  CHECK(oracle::rel_l2(p.gradient, VectorField::from_function(g32, [](double x, double) { return std::pair{sin(x), 0.0}; })) < 1e-15);
  CHECK(std::abs(p.mean[0]) < 1e-16);

  VectorField v = oracle::random_band_limited_vector(g64, 20, 4);
  for (double& x : v.x.values()) x += 0.75;
  p = helmholtz_decompose(v);
  VectorField sum = p.solenoidal + p.gradient;
  for (double& x : sum.x.values()) x += p.mean[0];
  for (double& y : sum.y.values()) y += p.mean[1];
  CHECK(oracle::rel_l2(sum, v) < 1e-12);
  CHECK(std::abs(inner(p.solenoidal, p.gradient)) <= 1e-10 * l2_norm(p.solenoidal) * l2_norm(p.gradient));
  CHECK(p.mean[0] == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("dealiasing removes the upper third and keeps the rest") {
  const ScalarField lo = ScalarField::from_function(g32, [](double x, double y) { return cos(10 * x + 3 * y); });
  CHECK(oracle::max_diff(dealias(lo), lo) < 1e-14);
  const ScalarField hi = ScalarField::from_function(g32, [](double x, double) { return cos(11 * x); });
  CHECK(max_abs(dealias(hi)) < 1e-14);
  // advection of a single mode along itself vanishes
  const ScalarField w = ScalarField::from_function(g32, [](double x, double y) { return sin(x) * sin(y); });
  CHECK(max_abs(advect(biot_savart(w), w)) < 1e-13);
}

TEST_CASE("interpolation of single modes") {
  const ScalarField sx = ScalarField::from_function(g32, [](double x, double) { return sin(x); });
  const SpectralInterpolant it(sx);
  CHECK(it.value({std::numbers::pi / 2, 0.4}) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(it.value({0.3, 1.1}) - sin(0.3)) < 1e-13);
  // wrapped and negative coordinates
  CHECK(std::abs(it.value({0.3 - 4 * std::numbers::pi, 1.1 + 2 * std::numbers::pi}) - sin(0.3)) < 1e-13);
}

TEST_CASE("interpolation reproduces nodes and matches direct trigonometric sums") {
  const ScalarField f = oracle::random_band_limited(g32, 6, 11);
  const SpectralInterpolant it(f);
  for (int iy = 0; iy < 32; iy += 5)
    for (int ix = 0; ix < 32; ix += 3) CHECK(std::abs(it.value({g32.coord(ix), g32.coord(iy)}) - f(ix, iy)) < 1e-12);

  const oracle::DirectTrig exact(f);
  double err = 0, scale = max_abs(f);
  for (int i = 0; i < 200; ++i) {
    const Point p{0.0311 * i * i, 0.7 + 0.173 * i};
    err = std::max(err, std::abs(it.value(p) - exact(p)));
  }
  // stencil model: ~1e-3 (k h / 8)^8 per unit amplitude = 2.4e-10 at k = 6, n = 32
  CHECK(err <= 1e-10 * scale);
}

TEST_CASE("interpolation error stays small up to a quarter of the grid band") {
  const ScalarField f = oracle::random_band_limited(g64, 16, 5);
  const SpectralInterpolant it(f);
  const oracle::DirectTrig exact(f);
  double err = 0;
  for (int i = 0; i < 100; ++i) {
    const Point p{0.0537 * i, 6.1 - 0.0417 * i};
    err = std::max(err, std::abs(it.value(p) - exact(p)));
  }
  CHECK(err <= 1e-7 * max_abs(f));
}

TEST_CASE("interpolant blends are linear in the weight") {
  const ScalarField a = oracle::random_band_limited(g32, 5, 1), b = oracle::random_band_limited(g32, 5, 2);
  const SpectralInterpolant ia(a), ib(b);
  const SpectralInterpolant mid = SpectralInterpolant::blend(ia, ib, 0.25);
  const Point p{1.234, 5.678};
  CHECK(std::abs(mid.value(p) - (0.75 * ia.value(p) + 0.25 * ib.value(p))) < 1e-14);
}
