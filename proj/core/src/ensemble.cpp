#include "stochflow/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "stochflow/parallel.hpp"
#include "stochflow/random.hpp"
#include "stochflow/spectral.hpp"

namespace stochflow {

BrownianPath::BrownianPath(double dt, double nu, std::vector<Point> w)
    : dt_(dt), nu_(nu), scale_(std::sqrt(2.0 * nu)), w_(std::move(w)) {
  if (w_.empty()) throw StructuralError("BrownianPath: no samples");
  if (nu < 0) throw StructuralError("BrownianPath: nu must be nonnegative");
}

Point BrownianPath::shift_at_stamp(std::size_t j) const { return {scale_ * w_[j].x, scale_ * w_[j].y}; }

Point BrownianPath::shift(double t) const {
  const double r = t / dt_;
  if (r < -1e-8 || r > static_cast<double>(steps()) + 1e-8)
    throw StructuralError("BrownianPath: time outside the sampled range");
  if (steps() == 0) return shift_at_stamp(0);
  const double rc = std::clamp(r, 0.0, static_cast<double>(steps()));
  const std::size_t j = std::min(static_cast<std::size_t>(rc), steps() - 1);
  const double lam = rc - static_cast<double>(j);
  if (lam == 0) return shift_at_stamp(j);
  const Point a = w_[j], b = w_[j + 1];
  return {scale_ * ((1 - lam) * a.x + lam * b.x), scale_ * ((1 - lam) * a.y + lam * b.y)};
}

BrownianPath make_path(std::uint64_t seed, std::uint64_t index, std::size_t steps, double dt, double nu) {
  std::vector<Point> w(steps + 1);
  const double s = std::sqrt(dt);
  for (std::size_t j = 1; j <= steps; ++j) {
    const auto z = gaussian_pair(seed, index, j - 1);
    w[j] = {w[j - 1].x + s * z[0], w[j - 1].y + s * z[1]};
  }
  return BrownianPath(dt, nu, std::move(w));
}

Ensemble::Ensemble(std::uint64_t seed, std::vector<BrownianPath> paths) : seed_(seed), paths_(std::move(paths)) {
  if (paths_.empty()) throw StructuralError("Ensemble: no paths");
}

Ensemble sample_paths(std::size_t m, double T, double dt, double nu, std::uint64_t seed) {
  if (m < 1) throw StructuralError("sample_paths: m must be at least 1");
  if (!(dt > 0) || !(T > 0)) throw StructuralError("sample_paths: T and dt must be positive");
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * T)
    throw StructuralError("sample_paths: dt must divide T");
  std::vector<std::optional<BrownianPath>> slots(m);
  parallel_for(m, [&](std::size_t i) { slots[i].emplace(make_path(seed, i, static_cast<std::size_t>(steps), dt, nu)); });
  std::vector<BrownianPath> paths;
  paths.reserve(m);
  for (auto& s : slots) paths.push_back(std::move(*s));
  return Ensemble(seed, std::move(paths));
}

ScalarField shift_field(const ScalarField& f, Point c) {
  Spectrum s = to_spectrum(f);
  for (int iy = 0; iy < s.rows(); ++iy) {
    const double ky = s.ky(iy);
    for (int ix = 0; ix < s.cols(); ++ix) {
      if (s.nyquist(iy, ix)) {
        s.at(iy, ix) = 0;
        continue;
      }
      const double ph = ix * c.x + ky * c.y;
      s.at(iy, ix) *= cplx(std::cos(ph), std::sin(ph));
    }
  }
  return to_physical(s);
}

VectorField shift_field(const VectorField& v, Point c) { return VectorField(shift_field(v.x, c), shift_field(v.y, c)); }

FlowPair stochastic_flow_pair(const TimeSampledVelocity& u, const BrownianPath& path, double t, double dt,
                              FlowOptions opts) {
  if (!u.covers(0.0, t)) throw StructuralError("stochastic_flow_pair: velocity does not cover [0, t]");
  const Grid& g = u.grid();
  const ShiftFn shift = [&path](double tau) { return path.shift(tau); };
  const Point st = path.shift(t);

  VelocitySampler sampler(u);
  std::vector<Point> fwd = grid_points(g);
  advance_points(sampler, fwd, 0.0, t, dt, shift);
  for (Point& p : fwd) p = {p.x + st.x, p.y + st.y};

  std::vector<Point> bwd = grid_points(g);
  for (Point& p : bwd) p = {p.x - st.x, p.y - st.y};
  VelocitySampler sampler_b(u);
  advance_points(sampler_b, bwd, t, 0.0, dt, shift);
  return {flow_from_points(g, fwd, t, opts), flow_from_points(g, bwd, t, opts)};
}

void PairwiseSum::add(std::span<const double> x) {
  if (x.size() != length_) throw StructuralError("PairwiseSum: length mismatch");
  std::vector<double> carry(x.begin(), x.end());
  std::size_t l = 0;
  for (;; ++l) {
    if (l == levels_.size()) levels_.emplace_back();
    if (!levels_[l]) {
      levels_[l] = std::move(carry);
      break;
    }
    const std::vector<double>& lv = *levels_[l];
    for (std::size_t i = 0; i < length_; ++i) carry[i] = lv[i] + carry[i];
    levels_[l].reset();
  }
  ++count_;
}

std::vector<double> PairwiseSum::total() const {
  std::vector<double> acc(length_, 0.0);
  bool first = true;
  for (const auto& lv : levels_) {
    if (!lv) continue;
    if (first) {
      acc = *lv;
      first = false;
    } else {
      for (std::size_t i = 0; i < length_; ++i) acc[i] = (*lv)[i] + acc[i];
    }
  }
  return acc;
}

ScalarField ensemble_mean(std::span<const ScalarField> samples) {
  if (samples.empty()) throw StructuralError("ensemble_mean: empty sample list");
  const Grid& g = samples.front().grid();
  PairwiseSum sum(g.size());
  for (const auto& s : samples) {
    require_same_grid(g, s.grid(), "ensemble_mean");
    sum.add(s.values());
  }
  std::vector<double> t = sum.total();
  const double inv = static_cast<double>(samples.size());
  for (double& v : t) v /= inv;
  return ScalarField(g, std::move(t));
}

VectorField ensemble_mean(std::span<const VectorField> samples) {
  if (samples.empty()) throw StructuralError("ensemble_mean: empty sample list");
  std::vector<ScalarField> xs, ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (const auto& s : samples) {
    xs.push_back(s.x);
    ys.push_back(s.y);
  }
  return VectorField(ensemble_mean(xs), ensemble_mean(ys));
}

}  // namespace stochflow
