#pragma once

#include <span>

#include "stochflow/flow_map.hpp"
#include "stochflow/grid.hpp"

namespace stochflow {

// f(Phi(x)) on the grid
ScalarField compose_scalar(const ScalarField& f, const FlowMap& phi);
VectorField compose_vector(const VectorField& v, const FlowMap& phi);

// Phi_# theta = theta o Phi^{-1}; pass the inverse map
ScalarField pushforward_scalar(const ScalarField& theta, const FlowMap& inverse);
// Phi_# v = (grad Phi v) o Phi^{-1}
VectorField pushforward_vector(const VectorField& v, const FlowMap& phi, const FlowMap& inverse);
// grad* Phi (w o Phi)
VectorField pullback_covector(const VectorField& w, const FlowMap& phi);
// P[grad* l  u_composed], where u_composed is already u o l
VectorField weber_reconstruct(const VectorField& u_composed, const FlowMap& l);
// omega0 o A
ScalarField cauchy_vorticity(const ScalarField& omega0, const FlowMap& A);

// grad* A_t (w0 + int_0^t grad* X_tau f(tau, X_tau) dtau) o A_t, trapezoid over the history times.
// history[0] is the identity at the start time; A is the back-to-label map at the last history time.
VectorField dual_transport_solution(const VectorField& w0, const TimeSampledVelocity& f,
                                    std::span<const FlowMap> history, const FlowMap& A);

// 2 sum_j (d_x v_j d_y u_j - d_y v_j d_x u_j): the extra source in the curl of a Lie-transported field.
// Plain grid product, not dealiased.
ScalarField gradient_cross(const VectorField& u, const VectorField& v);

// Curl of v transported by u (dv/dt + [u, v] = 0), via
// J_t = [curl v0 + int_0^t (v.grad omega + gradient_cross(u, v)) o X_tau dtau] o A_t
ScalarField lie_transported_current(const VectorField& v0, const TimeSampledVelocity& u, double t, double dt);

}  // namespace stochflow
