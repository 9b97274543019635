#pragma once

#include <cstddef>
#include <vector>

#include "stochflow/ensemble.hpp"
#include "stochflow/model.hpp"

namespace stochflow {

struct LagrangianOptions {
  // window length; 0 means a single window over [t0, t0 + T]
  double window = 0;
  // windows must satisfy window * max|d_i u_j| <= window_fraction at every window start.
  // 0.5 is a calibrated artifact default.
  double window_fraction = 0.5;
  double tol = 1e-6;
  std::size_t max_iter = 25;
  // paths evaluated concurrently before their samples enter the reduction
  std::size_t block = 32;
};

struct LagrangianResult {
  // the initial state, then every dt
  std::vector<FluidState> trajectory;
  SolveReport report;
};

// Stochastic Lagrangian fixed point, window by window:
//   u <- T^{-1} P E[ grad* A (T u_k) o A + forcing ],  theta <- E[theta_k o A],  B <- P E[(grad A)^{-1} B_k o A]
// with A the back-to-label map of dX = u(t, X + sqrt(2 nu) W) dt over the window.
// The ensemble must cover [initial.t, initial.t + T] with a step dividing dt, at the model's nu.
LagrangianResult lagrangian_window_solve(const ModelSpec& model, const FluidState& initial, double T, double dt,
                                         const Ensemble& ensemble, const LagrangianOptions& opts = {});

// One path, no expectation: the Weber fixed point along a single shifted flow (navier_stokes(path.nu())).
// The iteration runs in the frame moving with the shift, where the velocity stays smooth in time.
LagrangianResult nonaveraged_shifted_euler(const VectorField& u0, const BrownianPath& path, double T, double dt,
                                           const LagrangianOptions& opts = {});

// the trajectory's velocities as a time-sampled field (uniform stamps required)
TimeSampledVelocity velocity_history(const std::vector<FluidState>& trajectory);

// max over nodes and components of |d_i u_j|
double max_velocity_gradient(const VectorField& u);

}  // namespace stochflow
