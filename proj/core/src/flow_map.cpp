#include "stochflow/flow_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stochflow/parallel.hpp"
#include "stochflow/spectral.hpp"

namespace stochflow {

ScalarField Jacobian::det() const {
  ScalarField d(xx.grid());
  for (std::size_t i = 0; i < d.grid().size(); ++i) d[i] = xx[i] * yy[i] - xy[i] * yx[i];
  return d;
}

Jacobian jacobian_of_displacement(const VectorField& d) {
  Jacobian j(d.grid());
  Gradients g1 = gradients(d.x), g2 = gradients(d.y);
  j.xx = std::move(g1.dx);
  j.xy = std::move(g1.dy);
  j.yx = std::move(g2.dx);
  j.yy = std::move(g2.dy);
  for (double& v : j.xx.values()) v += 1.0;
  for (double& v : j.yy.values()) v += 1.0;
  return j;
}

FlowMap::FlowMap(VectorField displacement, double time)
    : d_(std::move(displacement)), t_(time), j_(jacobian_of_displacement(d_)) {}

FlowMap FlowMap::identity(const Grid& g, double time) { return FlowMap(VectorField(g), time); }

Point FlowMap::image(int ix, int iy) const {
  const Grid& g = grid();
  return {g.coord(ix) + d_.x(ix, iy), g.coord(iy) + d_.y(ix, iy)};
}

std::vector<Point> FlowMap::apply(std::span<const Point> pts) const {
  const SpectralInterpolant it(d_);
  std::vector<Point> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point d = it.vector_value(pts[i]);
    out[i] = {pts[i].x + d.x, pts[i].y + d.y};
  }
  return out;
}

std::vector<Point> grid_points(const Grid& g) {
  std::vector<Point> p(g.size());
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) p[g.index(ix, iy)] = {g.coord(ix), g.coord(iy)};
  return p;
}

FlowMap flow_from_points(const Grid& g, std::span<const Point> pts, double time, FlowOptions opts) {
  if (pts.size() != g.size()) throw StructuralError("flow_from_points: point count does not match grid");
  VectorField d(g);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) {
      const std::size_t i = g.index(ix, iy);
      const double dx = pts[i].x - g.coord(ix), dy = pts[i].y - g.coord(iy);
      if (!std::isfinite(dx) || !std::isfinite(dy))
        throw NumericalError("flow map: non-finite characteristic at t = " + std::to_string(time));
      if (std::hypot(dx, dy) > opts.max_displacement)
        throw NumericalError("flow map: displacement beyond bound at t = " + std::to_string(time));
      d.x[i] = dx;
      d.y[i] = dy;
    }
  return FlowMap(std::move(d), time);
}

FlowMap compose(const FlowMap& X, const FlowMap& A) {
  require_same_grid(X.grid(), A.grid(), "compose");
  const Grid& g = A.grid();
  std::vector<Point> pts(g.size());
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix) pts[g.index(ix, iy)] = A.image(ix, iy);
  const std::vector<Point> img = X.apply(pts);
  return flow_from_points(g, img, X.time(), {std::numeric_limits<double>::infinity()});
}

double inverse_defect(const FlowMap& X, const FlowMap& A) {
  const FlowMap c = compose(X, A);
  return max_abs(c.displacement().x) > max_abs(c.displacement().y) ? max_abs(c.displacement().x)
                                                                    : max_abs(c.displacement().y);
}

TimeSampledVelocity::TimeSampledVelocity(double t0, double dt, std::vector<VectorField> stamps)
    : t0_(t0), dt_(dt), u_(std::move(stamps)) {
  if (u_.empty()) throw StructuralError("TimeSampledVelocity: no snapshots");
  if (u_.size() > 1 && !(dt > 0)) throw StructuralError("TimeSampledVelocity: stamps must be strictly increasing");
  for (const auto& v : u_) require_same_grid(u_.front().grid(), v.grid(), "TimeSampledVelocity");
}

TimeSampledVelocity TimeSampledVelocity::steady(VectorField u) {
  std::vector<VectorField> v;
  v.push_back(std::move(u));
  return TimeSampledVelocity(0.0, 1.0, std::move(v));
}

bool TimeSampledVelocity::covers(double ta, double tb) const {
  if (steady()) return true;
  const double eps = 1e-9 * dt_;
  return std::min(ta, tb) >= t0_ - eps && std::max(ta, tb) <= t1() + eps;
}

VectorField TimeSampledVelocity::at(double t) const {
  if (steady()) return u_.front();
  if (!covers(t, t)) throw StructuralError("TimeSampledVelocity: time outside sampled range");
  const double r = std::clamp((t - t0_) / dt_, 0.0, static_cast<double>(u_.size() - 1));
  const std::size_t j = std::min(static_cast<std::size_t>(r), u_.size() - 2);
  const double lam = r - static_cast<double>(j);
  VectorField out = (1 - lam) * u_[j];
  out.axpy(lam, u_[j + 1]);
  return out;
}

VelocitySampler::VelocitySampler(const TimeSampledVelocity& u)
    : u_(&u), stamps_(u.count()), mids_(u.count() > 1 ? u.count() - 1 : 0) {}

long VelocitySampler::half_index(double t, bool& exact) const {
  const double r2 = 2.0 * (t - u_->t0()) / u_->dt();
  const long last = 2 * static_cast<long>(u_->count() - 1);
  if (r2 < -1e-8 || r2 > static_cast<double>(last) + 1e-8)
    throw StructuralError("velocity requested outside its sampled time range (t = " + std::to_string(t) + ")");
  const long h = std::lround(r2);
  exact = std::abs(r2 - static_cast<double>(h)) < 1e-8;
  return std::clamp(h, 0L, last);
}

void VelocitySampler::prepare(double t) {
  auto ensure = [&](std::size_t j) {
    if (!stamps_[j]) stamps_[j].emplace(u_->stamp(j));
  };
  if (u_->steady()) {
    ensure(0);
    return;
  }
  bool exact = false;
  const long h = half_index(t, exact);
  if (exact) {
    if (h % 2 == 0) {
      ensure(static_cast<std::size_t>(h / 2));
      return;
    }
    const std::size_t j = static_cast<std::size_t>(h / 2);
    ensure(j);
    ensure(j + 1);
    if (!mids_[j]) mids_[j].emplace(SpectralInterpolant::blend(*stamps_[j], *stamps_[j + 1], 0.5));
    return;
  }
  const double r = std::clamp((t - u_->t0()) / u_->dt(), 0.0, static_cast<double>(u_->count() - 1));
  const std::size_t j = std::min(static_cast<std::size_t>(r), u_->count() - 2);
  ensure(j);
  ensure(j + 1);
}

void VelocitySampler::prepare_all() {
  keep_all_ = true;
  for (std::size_t j = 0; j < stamps_.size(); ++j)
    if (!stamps_[j]) stamps_[j].emplace(u_->stamp(j));
  for (std::size_t j = 0; j < mids_.size(); ++j)
    if (!mids_[j]) mids_[j].emplace(SpectralInterpolant::blend(*stamps_[j], *stamps_[j + 1], 0.5));
}

void VelocitySampler::release_outside(double ta, double tb) {
  if (u_->steady() || keep_all_) return;
  const double lo = std::min(ta, tb), hi = std::max(ta, tb);
  for (std::size_t j = 0; j < stamps_.size(); ++j) {
    const double tj = u_->t0() + u_->dt() * static_cast<double>(j);
    if (tj < lo - u_->dt() || tj > hi + u_->dt()) stamps_[j].reset();
  }
  for (std::size_t j = 0; j < mids_.size(); ++j) {
    const double tj = u_->t0() + u_->dt() * (static_cast<double>(j) + 0.5);
    if (tj < lo - u_->dt() || tj > hi + u_->dt()) mids_[j].reset();
  }
}

VelocitySampler::Resolved VelocitySampler::resolve(double t) const {
  auto need = [&](const std::optional<SpectralInterpolant>& s) -> const SpectralInterpolant* {
    if (!s) throw StructuralError("VelocitySampler: time not prepared (t = " + std::to_string(t) + ")");
    return &*s;
  };
  if (u_->steady()) return {need(stamps_[0])};
  bool exact = false;
  const long h = half_index(t, exact);
  if (exact) {
    if (h % 2 == 0) return {need(stamps_[static_cast<std::size_t>(h / 2)])};
    const std::size_t j = static_cast<std::size_t>(h / 2);
    if (mids_[j]) return {&*mids_[j]};
    return {need(stamps_[j]), need(stamps_[j + 1]), 0.5};
  }
  const double r = std::clamp((t - u_->t0()) / u_->dt(), 0.0, static_cast<double>(u_->count() - 1));
  const std::size_t j = std::min(static_cast<std::size_t>(r), u_->count() - 2);
  return {need(stamps_[j]), need(stamps_[j + 1]), r - static_cast<double>(j)};
}

Point VelocitySampler::Resolved::operator()(Point p) const {
  double va[2];
  a->evaluate(p, va);
  if (!b) return {va[0], va[1]};
  double vb[2];
  b->evaluate(p, vb);
  return {(1 - lambda) * va[0] + lambda * vb[0], (1 - lambda) * va[1] + lambda * vb[1]};
}

namespace {

long step_count(double span, double dt) {
  if (!(dt > 0)) throw StructuralError("advance_points: dt must be positive");
  return span == 0 ? 0 : std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
}

struct Stage {
  VelocitySampler::Resolved ua, um, ub;
  Point sa, sm, sb;
  double h;

  void run(std::span<Point> pts) const {
    for (Point& q : pts) {
      const Point p = q;
      const Point k1 = ua({p.x + sa.x, p.y + sa.y});
      const Point k2 = um({p.x + 0.5 * h * k1.x + sm.x, p.y + 0.5 * h * k1.y + sm.y});
      const Point k3 = um({p.x + 0.5 * h * k2.x + sm.x, p.y + 0.5 * h * k2.y + sm.y});
      const Point k4 = ub({p.x + h * k3.x + sb.x, p.y + h * k3.y + sb.y});
      q = {p.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x), p.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y)};
    }
  }
};

Stage make_stage(const VelocitySampler& sampler, double ta, double tm, double tb, double h, const ShiftFn& shift) {
  return {sampler.resolve(ta),
          sampler.resolve(tm),
          sampler.resolve(tb),
          shift ? shift(ta) : Point{},
          shift ? shift(tm) : Point{},
          shift ? shift(tb) : Point{},
          h};
}

}  // namespace

void advance_points(VelocitySampler& sampler, std::span<Point> pts, double t0, double t1, double dt,
                    const ShiftFn& shift) {
  const long steps = step_count(std::abs(t1 - t0), dt);
  if (steps == 0) return;
  const double h = (t1 - t0) / static_cast<double>(steps);
  constexpr std::size_t kBlock = 512;
  const std::size_t blocks = (pts.size() + kBlock - 1) / kBlock;
  for (long k = 0; k < steps; ++k) {
    const double ta = t0 + h * static_cast<double>(k);
    const double tm = ta + 0.5 * h;
    const double tb = (k + 1 == steps) ? t1 : t0 + h * static_cast<double>(k + 1);
    sampler.prepare(ta);
    sampler.prepare(tm);
    sampler.prepare(tb);
    const Stage st = make_stage(sampler, ta, tm, tb, h, shift);
    parallel_for(blocks, [&](std::size_t b) {
      const std::size_t lo = b * kBlock, hi = std::min(pts.size(), lo + kBlock);
      st.run(pts.subspan(lo, hi - lo));
    });
    sampler.release_outside(ta, tb);
  }
}

void advance_points_prepared(const VelocitySampler& sampler, std::span<Point> pts, double t0, double t1, double dt,
                             const ShiftFn& shift) {
  const long steps = step_count(std::abs(t1 - t0), dt);
  if (steps == 0) return;
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (long k = 0; k < steps; ++k) {
    const double ta = t0 + h * static_cast<double>(k);
    const double tb = (k + 1 == steps) ? t1 : t0 + h * static_cast<double>(k + 1);
    make_stage(sampler, ta, ta + 0.5 * h, tb, h, shift).run(pts);
  }
}

namespace {

FlowMap characteristic_map(const TimeSampledVelocity& u, double from, double to, double dt, FlowOptions opts,
                           double stamp) {
  if (!u.covers(from, to)) throw StructuralError("flow: velocity does not cover the integration interval");
  VelocitySampler sampler(u);
  std::vector<Point> pts = grid_points(u.grid());
  advance_points(sampler, pts, from, to, dt);
  return flow_from_points(u.grid(), pts, stamp, opts);
}

}  // namespace

FlowMap integrate_flow(const TimeSampledVelocity& u, double t0, double t1, double dt, FlowOptions opts) {
  return characteristic_map(u, t0, t1, dt, opts, t1);
}

FlowMap invert_flow(const TimeSampledVelocity& u, double t0, double t1, double dt, FlowOptions opts) {
  return characteristic_map(u, t1, t0, dt, opts, t1);
}

}  // namespace stochflow
