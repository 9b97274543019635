#include "stochflow/picard.hpp"

#include <cmath>
#include <string>

#include "path_engine.hpp"
#include "stochflow/flow_map.hpp"
#include "stochflow/spectral.hpp"
#include "stochflow/transport.hpp"

namespace stochflow {
namespace {

struct Flows {
  std::vector<FlowMap> X, A;
};

Flows flows_of(const std::vector<VectorField>& u, double dt) {
  const TimeSampledVelocity vel(0, dt, u);
  Flows f;
  const Grid& g = u.front().grid();
  f.X.push_back(FlowMap::identity(g));
  f.A.push_back(FlowMap::identity(g));
  for (std::size_t j = 1; j < u.size(); ++j) {
    const double t = dt * static_cast<double>(j);
    f.X.push_back(integrate_flow(vel, 0, t, dt));
    f.A.push_back(invert_flow(vel, 0, t, dt));
  }
  return f;
}

}  // namespace

PicardResult picard_boussinesq(const VectorField& u0, const ScalarField& theta0, const VectorField& B0, double T,
                               double dt, const PicardOptions& opts) {
  require_same_grid(u0.grid(), theta0.grid(), "picard_boussinesq");
  require_same_grid(u0.grid(), B0.grid(), "picard_boussinesq");
  if (!(T > 0) || !(dt > 0)) throw StructuralError("picard_boussinesq: T and dt must be positive");
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * std::max(1.0, T))
    throw StructuralError("picard_boussinesq: dt must divide T");
  const double bound = opts.time_constant / (1 + max_abs(u0) + max_abs(theta0) + max_abs(B0));
  if (T > bound * (1 + 1e-9))
    throw StructuralError("picard_boussinesq: T = " + std::to_string(T) + " exceeds the small-time bound " +
                          std::to_string(bound));
  if (!u0.all_finite() || !theta0.all_finite() || !B0.all_finite())
    throw NumericalError("picard_boussinesq: non-finite initial data");
  if (l2_norm(divergence(B0)) > 1e-10 * std::max(1.0, l2_norm(B0)))
    throw StructuralError("picard_boussinesq: B0 must be divergence free");

  const std::size_t S = static_cast<std::size_t>(steps);
  const Grid& g = u0.grid();
  PicardResult res;
  std::vector<VectorField> u(S + 1, u0);
  detail::Iterate prev, cur;
  for (std::size_t it = 0;; ++it) {
    const Flows f = flows_of(u, dt);
    cur.u = u;
    cur.theta.clear();
    cur.B.clear();
    for (std::size_t j = 0; j <= S; ++j) {
      cur.theta.push_back(compose_scalar(theta0, f.A[j]));
      cur.B.push_back(pushforward_vector(B0, f.X[j], f.A[j]));
    }
    if (it > 0) {
      const double d = detail::iterate_difference(cur, prev);
      if (!std::isfinite(d)) throw NumericalError("picard_boussinesq: non-finite iterate");
      res.report.iterates.push_back(d);
      if (d <= opts.tol) {
        res.report.converged = true;
        break;
      }
    }
    if (it == opts.max_iter) break;

    // running trapezoid of grad* X G o X
    VectorField integral(g), last(g);
    for (std::size_t j = 0; j <= S; ++j) {
      VectorField G = advect(cur.B[j], cur.B[j]);
      G.y += cur.theta[j];
      VectorField pulled = pullback_covector(G, f.X[j]);
      if (j > 0) {
        integral.axpy(0.5 * dt, last);
        integral.axpy(0.5 * dt, pulled);
      }
      last = std::move(pulled);
      u[j] = weber_reconstruct(compose_vector(u0 + integral, f.A[j]), f.A[j]);
    }
    prev = cur;
  }
  res.report.window_iterations.push_back(res.report.iterates.size());
  for (std::size_t j = 0; j <= S; ++j)
    res.trajectory.push_back(FluidState::make(dt * static_cast<double>(j), cur.u[j], cur.theta[j], cur.B[j]));
  return res;
}

}  // namespace stochflow
