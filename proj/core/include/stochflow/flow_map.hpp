#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stochflow/grid.hpp"
#include "stochflow/interpolation.hpp"

namespace stochflow {

// d_b X_a stored as xx = dX1/dx, xy = dX1/dy, yx = dX2/dx, yy = dX2/dy
struct Jacobian {
  ScalarField xx, xy, yx, yy;
  explicit Jacobian(const Grid& g) : xx(g), xy(g), yx(g), yy(g) {}
  ScalarField det() const;
};

// Jacobian of x -> x + d(x) by spectral differentiation of the periodic displacement
Jacobian jacobian_of_displacement(const VectorField& d);

// Diffeomorphism of the torus, X(x) = x + d(x) with d periodic and stored unwrapped.
class FlowMap {
 public:
  FlowMap(VectorField displacement, double time);
  static FlowMap identity(const Grid& g, double time = 0);

  const Grid& grid() const { return d_.grid(); }
  double time() const { return t_; }
  const VectorField& displacement() const { return d_; }
  const Jacobian& jacobian() const { return j_; }
  ScalarField det_jacobian() const { return j_.det(); }

  // image of a grid node, unwrapped
  Point image(int ix, int iy) const;
  // images of arbitrary points, through the trigonometric interpolant of d
  std::vector<Point> apply(std::span<const Point> pts) const;

 private:
  VectorField d_;
  double t_;
  Jacobian j_;
};

// X(A(x)) on the grid
FlowMap compose(const FlowMap& X, const FlowMap& A);
// sup over nodes of |X(A(x)) - x|
double inverse_defect(const FlowMap& X, const FlowMap& A);

// Velocity snapshots at uniform stamps t0 + j dt, linear in time between stamps.
// A single snapshot is treated as steady and covers every time.
class TimeSampledVelocity {
 public:
  TimeSampledVelocity(double t0, double dt, std::vector<VectorField> stamps);
  static TimeSampledVelocity steady(VectorField u);

  bool steady() const { return u_.size() == 1; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double t1() const { return t0_ + dt_ * static_cast<double>(u_.size() - 1); }
  std::size_t count() const { return u_.size(); }
  const Grid& grid() const { return u_.front().grid(); }
  const VectorField& stamp(std::size_t j) const { return u_[j]; }
  VectorField at(double t) const;
  bool covers(double ta, double tb) const;

 private:
  double t0_;
  double dt_;
  std::vector<VectorField> u_;
};

// Interpolants of a TimeSampledVelocity at stamps and stamp midpoints.
// prepare() is not thread-safe; evaluation after preparation is.
class VelocitySampler {
 public:
  explicit VelocitySampler(const TimeSampledVelocity& u);

  void prepare(double t);
  void prepare_all();
  // drop stamp interpolants outside [ta, tb]; no-op after prepare_all
  void release_outside(double ta, double tb);

  // velocity at a fixed time, resolved once and then evaluated at many points
  struct Resolved {
    const SpectralInterpolant* a = nullptr;
    const SpectralInterpolant* b = nullptr;
    double lambda = 0;
    Point operator()(Point p) const;
  };
  // requires prepare(t) (or prepare_all)
  Resolved resolve(double t) const;

  Point velocity(double t, Point p) const { return resolve(t)(p); }

 private:
  long half_index(double t, bool& exact) const;

  const TimeSampledVelocity* u_;
  std::vector<std::optional<SpectralInterpolant>> stamps_;
  std::vector<std::optional<SpectralInterpolant>> mids_;
  bool keep_all_ = false;
};

struct FlowOptions {
  // largest tolerated |X(x) - x|; beyond it the flow has left the resolvable range
  double max_displacement = 1e3;
};

// Time-dependent shift s(t); characteristics solve dX/dt = u(t, X + s(t)).
using ShiftFn = std::function<Point(double)>;

// RK4 from t0 to t1 (either direction) with uniform steps no longer than dt.
void advance_points(VelocitySampler& sampler, std::span<Point> pts, double t0, double t1, double dt,
                    const ShiftFn& shift = {});
// Same steps, serial, against a sampler that already holds every interpolant it needs
// (prepare_all); safe to call concurrently on disjoint point sets.
void advance_points_prepared(const VelocitySampler& sampler, std::span<Point> pts, double t0, double t1, double dt,
                             const ShiftFn& shift = {});

FlowMap integrate_flow(const TimeSampledVelocity& u, double t0, double t1, double dt, FlowOptions opts = {});
// Back-to-label map at t1: positions at t0 of the characteristics through the nodes at t1.
FlowMap invert_flow(const TimeSampledVelocity& u, double t0, double t1, double dt, FlowOptions opts = {});

// grid nodes as points
std::vector<Point> grid_points(const Grid& g);
// displacement field pts - nodes, checked against the bound
FlowMap flow_from_points(const Grid& g, std::span<const Point> pts, double time, FlowOptions opts = {});

}  // namespace stochflow
