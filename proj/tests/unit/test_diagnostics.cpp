// Loops, circulation, Kelvin residuals, Ertel defects, ledger.

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "stochflow/diagnostics.hpp"
#include "stochflow/lagrangian.hpp"
#include "stochflow/reference.hpp"
#include "stochflow/spectral.hpp"
#include "stochflow/transport.hpp"

using namespace stochflow;
using std::cos;
using std::sin;

namespace {

constexpr double pi = std::numbers::pi;
const Grid g32(32);
const Grid g64(64);

VectorField tg_velocity(const Grid& g) {
  return VectorField::from_function(g, [](double x, double y) { return std::pair{-sin(x) * cos(y), cos(x) * sin(y)}; });
}

VectorField shear(const Grid& g) {
  return VectorField::from_function(g, [](double, double y) { return std::pair{sin(y), 0.0}; });
}

VectorField mixed_velocity(const Grid& g) {
  return biot_savart(ScalarField::from_function(g, [](double x, double y) {
    return 2 * sin(x) * sin(y) + 0.8 * cos(2 * x + y) + 0.6 * sin(x - 2 * y + 0.3) + 0.5 * cos(y + 0.7);
  }));
}

// closed-form Taylor-Green circulation around a circle by a fine trapezoid rule
double tg_circle_oracle(Point c, double r, int nodes) {
  double s = 0;
  for (int i = 0; i < nodes; ++i) {
    const double t = 2 * pi * i / nodes;
    const double x = c.x + r * cos(t), y = c.y + r * sin(t);
    s += (-sin(x) * cos(y)) * (-r * sin(t)) + (cos(x) * sin(y)) * (r * cos(t));
  }
  return s * 2 * pi / nodes;
}

FlowPair deterministic_pair(const VectorField& u, double t, double dt) {
  const auto v = TimeSampledVelocity::steady(u);
  return {integrate_flow(v, 0, t, dt), invert_flow(v, 0, t, dt)};
}

}  // namespace

TEST_CASE("loops: construction and resolution") {
  CHECK_THROWS_AS(MaterialLoop::circle({1, 1}, 0.5, 32), StructuralError);
  CHECK_THROWS_AS(MaterialLoop::circle({1, 1}, 0.5, 65), StructuralError);
  const MaterialLoop c = MaterialLoop::circle({pi, pi}, 1, 128, "c");
  CHECK(c.size() == 128);
  CHECK(c.max_spacing() == doctest::Approx(2 * sin(pi / 128)));
  CHECK(c.resolved(g32));
  const MaterialLoop h = MaterialLoop::horizontal(1.0, 64);
  CHECK(h.winding()[0] == 1);
  CHECK(h.max_spacing() == doctest::Approx(2 * pi / 64));
  const MaterialLoop r = c.refined();
  CHECK(r.size() == 256);
  CHECK(r.nodes()[2] == c.nodes()[1]);
  CHECK(std::abs(std::hypot(r.nodes()[1].x - pi, r.nodes()[1].y - pi) - 1) <= 1e-13);
  // radius 2.5 with 64 nodes: spacing 0.245 > 4 h = 0.196 at n = 128
  CHECK_THROWS_AS(circulation(VectorField(Grid(128)), MaterialLoop::circle({pi, pi}, 2.5, 64)), StructuralError);
}

TEST_CASE("circulation: constant and gradient fields") {
  const VectorField c = VectorField::from_function(g32, [](double, double) { return std::pair{0.7, -1.3}; });
  const VectorField grad = gradient(oracle::random_band_limited(g32, 5, 4));
  for (const MaterialLoop& l : {MaterialLoop::circle({1, 2}, 1.5, 256), MaterialLoop::circle({4, 4}, 0.3, 64)}) {
    CHECK(std::abs(circulation(c, l)) <= 1e-10);
    CHECK(std::abs(circulation(grad, l)) <= 1e-8);
  }
  // a horizontal loop picks up the mean flow
  CHECK(circulation(c, MaterialLoop::horizontal(0.4, 64)) == doctest::Approx(0.7 * 2 * pi));
}

TEST_CASE("circulation: Taylor-Green against a fine closed-form quadrature") {
  const VectorField u = tg_velocity(g32);
  for (Point ctr : {Point{pi, pi}, Point{pi / 2, pi / 2}, Point{1.1, 2.3}}) {
    const double oracle_value = tg_circle_oracle(ctr, 1, 16384);
    CHECK(std::abs(circulation(u, MaterialLoop::circle(ctr, 1, 256)) - oracle_value) <= 1e-8);
  }
  CHECK(std::abs(tg_circle_oracle({pi / 2, pi / 2}, 1, 16384)) > 1);
}

TEST_CASE("circulation: doubling the loop nodes changes nothing once resolved") {
  const VectorField u = mixed_velocity(g32);
  const auto flows = deterministic_pair(u, 0.5, 0.01);
  const MaterialLoop l = advect_loop(MaterialLoop::circle({2, 3}, 1, 256), flows.forward);
  CHECK(std::abs(circulation(u, l.refined()) - circulation(u, l)) <= 1e-9);
}

TEST_CASE("advect_loop: identity, shift, shear, refinement") {
  const MaterialLoop l = MaterialLoop::circle({pi, pi}, 1, 128);
  const MaterialLoop same = advect_loop(l, FlowMap::identity(g32));
  for (std::size_t i = 0; i < l.size(); ++i) CHECK(same.nodes()[i] == l.nodes()[i]);

  const auto shift = deterministic_pair(VectorField::from_function(g32, [](double, double) { return std::pair{0.5, 0.25}; }),
                                        2, 0.5);
  const MaterialLoop moved = advect_loop(l, shift.forward);
  double e = 0;
  for (std::size_t i = 0; i < l.size(); ++i)
    e = std::max({e, std::abs(moved.nodes()[i].x - l.nodes()[i].x - 1), std::abs(moved.nodes()[i].y - l.nodes()[i].y - 0.5)});
  CHECK(e <= 1e-13);

  const auto sh = deterministic_pair(shear(g32), 1, 1e-3);
  const MaterialLoop s = advect_loop(l, sh.forward);
  REQUIRE(s.size() == l.size());
  e = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    const Point p = l.nodes()[i];
    e = std::max({e, std::abs(s.nodes()[i].x - (p.x + sin(p.y))), std::abs(s.nodes()[i].y - p.y)});
  }
  CHECK(e <= 1e-8);

  // strong stretching forces refinement
  const auto strong = deterministic_pair(3.0 * shear(g64), 2, 1e-2);
  const MaterialLoop stretched = advect_loop(MaterialLoop::circle({pi, pi}, 1, 64), strong.forward);
  CHECK(stretched.size() > 64);
  CHECK(stretched.resolved(g64));
}

TEST_CASE("pathwise Kelvin: deterministic shear and pure shifts") {
  const VectorField u = shear(g32);
  const MaterialLoop l = MaterialLoop::circle({pi, 2}, 1, 256);
  const auto flows = deterministic_pair(u, 1, 1e-2);
  CHECK(pathwise_kelvin_residual(u, l, flows) <= 1e-6);

  // u = 0 with noise: rigid translation
  const Ensemble e = sample_paths(4, 1, 0.1, 0.5, 9);
  const auto zero = TimeSampledVelocity::steady(VectorField(g32));
  const VectorField xi0 = mixed_velocity(g32);
  for (const auto& p : e.paths()) {
    const FlowPair f = stochastic_flow_pair(zero, p, 1, 0.1);
    CHECK(pathwise_kelvin_residual(xi0, l, f) <= 1e-10);
  }
}

TEST_CASE("pathwise Kelvin: residual decreases with the time step") {
  const VectorField u = mixed_velocity(g64);
  const MaterialLoop l = MaterialLoop::circle({2, 3}, 1, 256);
  const double coarse = pathwise_kelvin_residual(u, l, deterministic_pair(u, 0.5, 0.1));
  const double fine = pathwise_kelvin_residual(u, l, deterministic_pair(u, 0.5, 0.05));
  MESSAGE("Kelvin residual dt=0.1: " << coarse << ", dt=0.05: " << fine);
  CHECK(fine < coarse);
  CHECK(fine <= 1e-6);
}

TEST_CASE("pathwise Kelvin and enstrophy along a gsqg run") {
  const double nu = 0.05, T = 0.25, alpha = 0.5;
  const ModelSpec m = ModelSpec::gsqg(alpha, nu);
  VectorField u0 = velocity_from_active_scalar(m, oracle::random_band_limited(g64, 3, 12));
  u0 *= 0.5 / max_abs(u0);
  const Ensemble e = sample_paths(4, T, 0.0125, nu, 5);
  LagrangianOptions o;
  o.tol = 1e-8;
  const auto r = lagrangian_window_solve(m, FluidState::make(0, u0), T, 0.05, e, o);
  const TimeSampledVelocity hist = velocity_history(r.trajectory);
  const VectorField xi0 = momentum(m, u0);
  const MaterialLoop l = MaterialLoop::circle({3, 3}, 1, 256);
  for (const auto& p : e.paths()) {
    const FlowPair f = stochastic_flow_pair(hist, p, T, 0.025);
    CHECK(pathwise_kelvin_residual(xi0, l, f) <= 1e-3);
    CHECK(pathwise_enstrophy_defect(curl2d(xi0), f.backward) <= 1e-3);
    const auto [lo, hi] = det_extremes(f.forward);
    CHECK(lo >= 1 - 1e-6);
    CHECK(hi <= 1 + 1e-6);
  }
}

TEST_CASE("statistical Kelvin: zero viscosity and single paths") {
  const VectorField u0 = mixed_velocity(g32);
  const MaterialLoop l = MaterialLoop::circle({2, 3}, 1, 256);
  for (double nu : {0.0, 0.05}) {
    CAPTURE(nu);
    const Ensemble e = sample_paths(1, 0.2, 0.025, nu, 8);
    LagrangianOptions o;
    o.tol = 1e-12;
    o.max_iter = 40;
    const auto r = lagrangian_window_solve(ModelSpec::navier_stokes(nu), FluidState::make(0, u0), 0.2, 0.05, e, o);
    const FlowPair f = stochastic_flow_pair(velocity_history(r.trajectory), e.path(0), 0.2, 0.05);
    const std::vector<FlowMap> A{f.backward};
    const StatisticalKelvin s = statistical_kelvin_residual(r.trajectory.back().u, u0, l, A);
    CHECK(s.standard_error == 0.0);
    CHECK(s.residual <= 1e-6);
    if (nu == 0) CHECK(std::abs(s.rhs - circulation(u0, advect_loop(l, A[0]))) == 0.0);
  }
}

TEST_CASE("statistical Kelvin: Navier-Stokes ensemble within three standard errors") {
  const double nu = 0.05, T = 0.2;
  const VectorField u0 = mixed_velocity(g32);
  const Ensemble e = sample_paths(200, T, 0.05, nu, 31);
  LagrangianOptions o;
  o.tol = 1e-8;
  const auto r = lagrangian_window_solve(ModelSpec::navier_stokes(nu), FluidState::make(0, u0), T, 0.1, e, o);
  const TimeSampledVelocity hist = velocity_history(r.trajectory);
  std::vector<FlowMap> A;
  for (const auto& p : e.paths()) A.push_back(stochastic_flow_pair(hist, p, T, 0.1).backward);
  const StatisticalKelvin s = statistical_kelvin_residual(r.trajectory.back().u, u0, MaterialLoop::circle({2, 3}, 1, 256), A);
  CHECK(s.standard_error > 0);
  CHECK(s.residual <= 3 * s.standard_error);
  CHECK_THROWS_AS(statistical_kelvin_residual(u0, u0, MaterialLoop::circle({2, 3}, 1, 256), {}), StructuralError);
}

TEST_CASE("Ertel: zero flow, steady shear, duality of the pairing") {
  const VectorField w0 = VectorField::from_function(g32, [](double x, double y) { return std::pair{sin(y) + cos(x + y), sin(2 * x) * cos(y)}; });
  const VectorField v0 = VectorField::from_function(g32, [](double x, double y) { return std::pair{sin(y), cos(x) * 0.5}; });

  const FlowMap I = FlowMap::identity(g32);
  CHECK(max_abs(ertel_defect(w0, v0, I, w0, v0)) <= 1e-14);

  const auto sh = deterministic_pair(shear(g32), 1, 1e-3);
  const VectorField wt = pullback_covector(w0, sh.backward);
  const VectorField vt = pushforward_vector(v0, sh.forward, sh.backward);
  CHECK(max_abs(ertel_defect(wt, vt, sh.forward, w0, v0)) <= 1e-5);
  CHECK(std::abs(inner(wt, vt) / inner(w0, v0) - 1) <= 1e-6);

  const std::vector<TimeSampledVelocity> none;
  const auto zero = TimeSampledVelocity::steady(VectorField(g32));
  const std::vector<FlowMap> hist{I};
  const VectorField w_dual = dual_transport_solution(w0, zero, hist, I);
  CHECK(max_abs(ertel_defect(w_dual, v0, I, w0, v0)) <= 1e-14);
}

TEST_CASE("Ertel: viscous average equals the Feynman-Kac average") {
  const double nu = 0.1, T = 0.3;
  const VectorField u = mixed_velocity(g32);
  const VectorField xi0 = tg_velocity(g32);
  const VectorField v0 = shear(g32);
  const Ensemble e = sample_paths(6, T, 0.05, nu, 2);
  std::vector<FlowPair> flows;
  for (const auto& p : e.paths()) flows.push_back(stochastic_flow_pair(TimeSampledVelocity::steady(u), p, T, 0.01));
  const ViscousErtel ve = viscous_ertel(xi0, v0, flows);
  CHECK(ve.defect <= 1e-5);
  CHECK(max_abs(ve.lambda) > 0.1);
}

TEST_CASE("Stokes: circulation equals the enclosed vorticity") {
  const VectorField u = biot_savart(oracle::random_band_limited(g32, 5, 44));
  for (double r : {0.5, 1.0, 2.0}) {
    CAPTURE(r);
    CHECK(stokes_defect(u, {3, 3}, r) <= 1e-4);
  }
}

TEST_CASE("ledger: enstrophy of inviscid runs, det extremes, CSV layout") {
  const ModelSpec m = ModelSpec::euler();
  VectorField u0 = biot_savart(oracle::random_band_limited(g64, 3, 2));
  u0 *= 0.5 / max_abs(u0);
  const auto traj = reference_solve(m, FluidState::make(0, u0), 1.0, 5e-3, {.output_dt = 0.5});
  ConservationLedger ledger;
  const std::vector<MaterialLoop> loops{MaterialLoop::circle({3, 3}, 1, 128, "c")};
  const auto flows = deterministic_pair(u0, 0.5, 0.01);
  for (const auto& s : traj) ledger_update(ledger, m, s, {.loops = loops, .forward = &flows.forward});
  const auto ens = ledger.series("enstrophy");
  REQUIRE(ens.size() == 3);
  CHECK(std::abs(ens.back() / ens.front() - 1) <= 1e-6);
  for (double d : ledger.series("det_min")) CHECK(d >= 1 - 1e-6);
  for (double d : ledger.series("det_max")) CHECK(d <= 1 + 1e-6);
  CHECK(ledger.times().size() == 3);
  CHECK_FALSE(ledger.has("cross_helicity"));

  const std::string csv = ledger.to_csv();
  CHECK(csv.rfind("t,energy,enstrophy,circulation_c,det_min,det_max\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  ConservationLedger sparse;
  sparse.begin_row(0);
  sparse.set("a", 1);
  sparse.begin_row(1);
  sparse.set("b", 2);
  CHECK(std::isnan(sparse.series("b")[0]));
  CHECK(std::isnan(sparse.series("a")[1]));
  CHECK_THROWS_AS(sparse.series("c"), StructuralError);
}

TEST_CASE("ledger: cross-helicity for Boussinesq-MHD states") {
  const VectorField B = tg_velocity(g32);
  const FluidState s = FluidState::make(0, tg_velocity(g32), ScalarField(g32), B);
  ConservationLedger ledger;
  ledger_update(ledger, ModelSpec::boussinesq_mhd(0), s, {.pathwise_enstrophy_defect = 0.0});
  CHECK(ledger.series("cross_helicity")[0] == doctest::Approx(2 * pi * pi));
  CHECK(ledger.series("pathwise_enstrophy_defect")[0] == 0.0);
}
