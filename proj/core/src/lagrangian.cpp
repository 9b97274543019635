#include "stochflow/lagrangian.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "path_engine.hpp"
#include "stochflow/spectral.hpp"

namespace stochflow {
namespace {

using detail::Frame;
using detail::Iterate;

std::size_t whole(double span, double step, const std::string& what) {
  const double r = span / step;
  const long n = std::lround(r);
  if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-9 * std::max(1.0, r))
    throw StructuralError(what);
  return static_cast<std::size_t>(n);
}

LagrangianResult run_windows(const ModelSpec& model, const FluidState& initial, double T, double dt,
                             std::span<const BrownianPath> paths, Frame frame, const LagrangianOptions& opts) {
  if (!(T > 0) || !(dt > 0)) throw StructuralError("lagrangian: T and dt must be positive");
  if (!(opts.tol > 0) || opts.max_iter < 1) throw StructuralError("lagrangian: need tol > 0 and max_iter >= 1");
  const double window = opts.window > 0 ? opts.window : T;
  const std::size_t windows = whole(T, window, "lagrangian: window must divide T");
  const std::size_t S = whole(window, dt, "lagrangian: dt must divide the window");
  const BrownianPath& p0 = paths.front();
  whole(dt, p0.dt(), "lagrangian: the ensemble step must divide dt");
  if (initial.t + T > p0.T() + 1e-9 * std::max(1.0, T))
    throw StructuralError("lagrangian: ensemble does not cover the time interval");
  if (std::abs(p0.nu() - model.nu) > 1e-15 * std::max(1.0, model.nu))
    throw StructuralError("lagrangian: ensemble viscosity differs from the model's");
  if (!initial.u.all_finite()) throw NumericalError("lagrangian: non-finite initial velocity");

  LagrangianResult res;
  res.trajectory.push_back(initial);
  res.report.converged = true;
  double se2_u = 0, se2_theta = 0, se2_B = 0;
  const bool forced = model.boussinesq();

  for (std::size_t w = 0; w < windows; ++w) {
    const FluidState& start = res.trajectory.back();
    const double g = max_velocity_gradient(start.u);
    if (window * g > opts.window_fraction * (1 + 1e-9))
      throw StructuralError("lagrangian: window " + std::to_string(window) + " exceeds " +
                            std::to_string(opts.window_fraction) + " / max|grad u| = " +
                            std::to_string(opts.window_fraction / g));
    detail::WindowSpec win{start.t, dt, S, frame, opts.block};
    std::optional<ScalarField> th0 = start.theta;
    std::optional<VectorField> B0 = start.B;
    if (forced) {
      if (!th0) th0.emplace(start.grid());
      if (!B0) B0.emplace(start.grid());
    }
    const detail::WindowMap map(model, win, start.u, th0, B0);

    Iterate cur;
    cur.u.assign(S + 1, start.u);
    if (forced) {
      cur.theta.assign(S + 1, *th0);
      cur.B.assign(S + 1, *B0);
    }
    Iterate best = cur;
    detail::MapResult best_r;
    double best_diff = std::numeric_limits<double>::infinity();
    bool done = false;
    std::size_t it = 0;
    while (it < opts.max_iter && !done) {
      ++it;
      detail::MapResult r = map.apply(cur, paths);
      const double diff = detail::iterate_difference(r.next, cur);
      if (!std::isfinite(diff)) throw NumericalError("lagrangian: non-finite iterate at t = " + std::to_string(start.t));
      res.report.iterates.push_back(diff);
      cur = r.next;
      if (diff < best_diff) {
        best_diff = diff;
        best = cur;
        best_r = std::move(r);
      }
      done = diff <= opts.tol;
    }
    res.report.window_iterations.push_back(it);
    if (!done) res.report.converged = false;
    se2_u += best_r.se_u.back() * best_r.se_u.back();
    if (forced) {
      se2_theta += best_r.se_theta.back() * best_r.se_theta.back();
      se2_B += best_r.se_B.back() * best_r.se_B.back();
    }
    for (std::size_t j = 1; j <= S; ++j) {
      const double t = start.t + dt * static_cast<double>(j);
      if (forced)
        res.trajectory.push_back(FluidState::make(t, best.u[j], best.theta[j], best.B[j]));
      else
        res.trajectory.push_back(FluidState::make(t, best.u[j]));
    }
  }
  res.report.mc_stats.emplace_back("u", std::sqrt(se2_u));
  if (forced) {
    res.report.mc_stats.emplace_back("theta", std::sqrt(se2_theta));
    res.report.mc_stats.emplace_back("B", std::sqrt(se2_B));
  }
  return res;
}

}  // namespace

LagrangianResult lagrangian_window_solve(const ModelSpec& model, const FluidState& initial, double T, double dt,
                                         const Ensemble& ensemble, const LagrangianOptions& opts) {
  return run_windows(model, initial, T, dt, ensemble.paths(), Frame::averaged, opts);
}

LagrangianResult nonaveraged_shifted_euler(const VectorField& u0, const BrownianPath& path, double T, double dt,
                                           const LagrangianOptions& opts) {
  const ModelSpec model = ModelSpec::navier_stokes(path.nu());
  return run_windows(model, FluidState::make(0, u0), T, dt, std::span<const BrownianPath>(&path, 1), Frame::shifted,
                     opts);
}

TimeSampledVelocity velocity_history(const std::vector<FluidState>& trajectory) {
  if (trajectory.empty()) throw StructuralError("velocity_history: empty trajectory");
  if (trajectory.size() == 1) return TimeSampledVelocity::steady(trajectory.front().u);
  const double dt = trajectory[1].t - trajectory[0].t;
  std::vector<VectorField> u;
  for (std::size_t j = 0; j < trajectory.size(); ++j) {
    const double expect = trajectory[0].t + dt * static_cast<double>(j);
    if (std::abs(trajectory[j].t - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      throw StructuralError("velocity_history: stamps are not uniform");
    u.push_back(trajectory[j].u);
  }
  return TimeSampledVelocity(trajectory[0].t, dt, std::move(u));
}

double max_velocity_gradient(const VectorField& u) {
  const Gradients a = gradients(u.x), b = gradients(u.y);
  return std::max({max_abs(a.dx), max_abs(a.dy), max_abs(b.dx), max_abs(b.dy)});
}

}  // namespace stochflow
