#pragma once

#include <vector>

#include "stochflow/model.hpp"

namespace stochflow {

struct ReferenceOptions {
  // spacing of recorded states; 0 records only the initial and final state
  double output_dt = 0;
  // largest accepted dt (max|u| + max|B|) n / 2
  double cfl_limit = 2.5;
};

// dt (sum of the largest velocity and field components) times the largest wavenumber n/2
double cfl_number(const FluidState& s, double dt);

// Pseudo-spectral vorticity-form solver: Lawson integrating-factor RK4, exact diffusion factor,
// 2/3-rule dealiasing of every product. Mean-free gauge for u and B; the mean of theta is kept.
//   gsqg:           q_t + u.grad q = nu Lap q,  u = (-Lap)^alpha biot_savart(q)
//   boussinesq_mhd: w_t + u.grad w = nu Lap w + d_x theta + B.grad j
//                   theta_t + u.grad theta = nu Lap theta
//                   j_t + u.grad j = nu Lap j + B.grad w + gradient_cross(u, B)
// with u = biot_savart(w), B = biot_savart(j).
std::vector<FluidState> reference_solve(const ModelSpec& model, const FluidState& initial, double T, double dt,
                                        const ReferenceOptions& opts = {});

}  // namespace stochflow
