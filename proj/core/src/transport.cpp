#include "stochflow/transport.hpp"

#include <cmath>

#include "stochflow/spectral.hpp"

namespace stochflow {
namespace {

std::vector<Point> node_images(const FlowMap& phi) {
  const Grid& g = phi.grid();
  std::vector<Point> p(g.size());
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) p[g.index(ix, iy)] = phi.image(ix, iy);
  return p;
}

// grad* J w, i.e. sum_b d_a Phi_b w_b
VectorField transpose_apply(const Jacobian& j, const VectorField& w) {
  VectorField r(w.grid());
  for (std::size_t i = 0; i < w.grid().size(); ++i) {
    r.x[i] = j.xx[i] * w.x[i] + j.yx[i] * w.y[i];
    r.y[i] = j.xy[i] * w.x[i] + j.yy[i] * w.y[i];
  }
  return r;
}

VectorField apply(const Jacobian& j, const VectorField& v) {
  VectorField r(v.grid());
  for (std::size_t i = 0; i < v.grid().size(); ++i) {
    r.x[i] = j.xx[i] * v.x[i] + j.xy[i] * v.y[i];
    r.y[i] = j.yx[i] * v.x[i] + j.yy[i] * v.y[i];
  }
  return r;
}

}  // namespace

ScalarField compose_scalar(const ScalarField& f, const FlowMap& phi) {
  require_same_grid(f.grid(), phi.grid(), "compose_scalar");
  const std::vector<double> v = interpolate_field(f, node_images(phi));
  return ScalarField(f.grid(), v);
}

VectorField compose_vector(const VectorField& v, const FlowMap& phi) {
  require_same_grid(v.grid(), phi.grid(), "compose_vector");
  const std::vector<Point> pts = node_images(phi);
  const SpectralInterpolant it(v);
  VectorField r(v.grid());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point q = it.vector_value(pts[i]);
    r.x[i] = q.x;
    r.y[i] = q.y;
  }
  return r;
}

ScalarField pushforward_scalar(const ScalarField& theta, const FlowMap& inverse) {
  return compose_scalar(theta, inverse);
}

VectorField pushforward_vector(const VectorField& v, const FlowMap& phi, const FlowMap& inverse) {
  return compose_vector(apply(phi.jacobian(), v), inverse);
}

VectorField pullback_covector(const VectorField& w, const FlowMap& phi) {
  return transpose_apply(phi.jacobian(), compose_vector(w, phi));
}

VectorField weber_reconstruct(const VectorField& u_composed, const FlowMap& l) {
  return leray_project(transpose_apply(l.jacobian(), u_composed));
}

ScalarField cauchy_vorticity(const ScalarField& omega0, const FlowMap& A) { return compose_scalar(omega0, A); }

VectorField dual_transport_solution(const VectorField& w0, const TimeSampledVelocity& f,
                                    std::span<const FlowMap> history, const FlowMap& A) {
  if (history.empty()) throw StructuralError("dual_transport_solution: empty flow history");
  VectorField acc = w0;
  VectorField prev(w0.grid());
  for (std::size_t k = 0; k < history.size(); ++k) {
    const FlowMap& X = history[k];
    VectorField term = transpose_apply(X.jacobian(), compose_vector(f.at(X.time()), X));
    if (k > 0) {
      const double h = X.time() - history[k - 1].time();
      acc.axpy(0.5 * h, prev);
      acc.axpy(0.5 * h, term);
    }
    prev = std::move(term);
  }
  return pullback_covector(acc, A);
}

ScalarField gradient_cross(const VectorField& u, const VectorField& v) {
  const Gradients u1 = gradients(u.x), u2 = gradients(u.y), v1 = gradients(v.x), v2 = gradients(v.y);
  ScalarField q(u.grid());
  for (std::size_t i = 0; i < q.grid().size(); ++i)
    q[i] = 2.0 * (v1.dx[i] * u1.dy[i] - v1.dy[i] * u1.dx[i] + v2.dx[i] * u2.dy[i] - v2.dy[i] * u2.dx[i]);
  return q;
}

ScalarField lie_transported_current(const VectorField& v0, const TimeSampledVelocity& u, double t, double dt) {
  const double t0 = u.steady() ? 0.0 : u.t0();
  const long steps = std::lround((t - t0) / dt);
  if (steps < 1 || std::abs(steps * dt - (t - t0)) > 1e-9 * std::max(1.0, t - t0))
    throw StructuralError("lie_transported_current: dt must divide the time interval");
  const Grid& g = v0.grid();
  VelocitySampler sampler(u);
  std::vector<Point> pts = grid_points(g);

  ScalarField acc = curl2d(v0);
  ScalarField prev(g);
  FlowMap A = FlowMap::identity(g, t0);
  for (long k = 0; k <= steps; ++k) {
    const double tk = t0 + dt * static_cast<double>(k);
    if (k > 0) advance_points(sampler, pts, tk - dt, tk, dt);
    const FlowMap X = flow_from_points(g, pts, tk);
    A = k == 0 ? FlowMap::identity(g, tk) : invert_flow(u, t0, tk, dt);
    const VectorField uk = u.at(tk);
    const VectorField vk = pushforward_vector(v0, X, A);
    const Gradients dw = gradients(curl2d(uk));
    ScalarField src = gradient_cross(uk, vk);
    for (std::size_t i = 0; i < g.size(); ++i) src[i] += vk.x[i] * dw.dx[i] + vk.y[i] * dw.dy[i];
    ScalarField term = compose_scalar(src, X);
    if (k > 0) {
      acc.axpy(0.5 * dt, prev);
      acc.axpy(0.5 * dt, term);
    }
    prev = std::move(term);
  }
  return compose_scalar(acc, A);
}

}  // namespace stochflow
