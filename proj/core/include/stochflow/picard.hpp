#pragma once

#include <cstddef>
#include <vector>

#include "stochflow/model.hpp"

namespace stochflow {

struct PicardOptions {
  double tol = 1e-8;
  std::size_t max_iter = 40;
  // T must satisfy T <= time_constant / (1 + max|u0| + max|theta0| + max|B0|). Calibrated by trial, not derived.
  double time_constant = 0.5;
};

struct PicardResult {
  // every dt from 0 to T
  std::vector<FluidState> trajectory;
  SolveReport report;
};

// Deterministic fixed-point iteration for inviscid Boussinesq-MHD. Per iteration, from the flows X, A of u^n:
//   theta = theta0 o A,  B = X_# B0,  G = theta e_y + B.grad B
//   v(t) = u0 + int_0^t grad* X G(s, X) ds  (trapezoid over the stamps)
//   u^{n+1}(t) = P[grad* A (v(t) o A)]
// Stops when the root-sum-square of relative L2 differences of (u, theta, B), sup over stamps, is <= tol.
PicardResult picard_boussinesq(const VectorField& u0, const ScalarField& theta0, const VectorField& B0, double T,
                               double dt, const PicardOptions& opts = {});

}  // namespace stochflow
