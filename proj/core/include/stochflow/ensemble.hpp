#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stochflow/flow_map.hpp"
#include "stochflow/grid.hpp"

namespace stochflow {

// Standard 2-D Brownian path sampled at t_j = j dt. The physical shift is sqrt(2 nu) W.
class BrownianPath {
 public:
  BrownianPath(double dt, double nu, std::vector<Point> w);

  double dt() const { return dt_; }
  double nu() const { return nu_; }
  double T() const { return dt_ * static_cast<double>(w_.size() - 1); }
  std::size_t steps() const { return w_.size() - 1; }
  std::span<const Point> values() const { return w_; }
  Point W(std::size_t j) const { return w_[j]; }

  Point shift_at_stamp(std::size_t j) const;
  // piecewise linear between stamps
  Point shift(double t) const;

 private:
  double dt_;
  double nu_;
  double scale_;
  std::vector<Point> w_;
};

BrownianPath make_path(std::uint64_t seed, std::uint64_t index, std::size_t steps, double dt, double nu);

class Ensemble {
 public:
  Ensemble(std::uint64_t seed, std::vector<BrownianPath> paths);

  std::size_t m() const { return paths_.size(); }
  std::uint64_t seed() const { return seed_; }
  const BrownianPath& path(std::size_t i) const { return paths_[i]; }
  std::span<const BrownianPath> paths() const { return paths_; }
  double dt() const { return paths_.front().dt(); }
  double T() const { return paths_.front().T(); }
  double nu() const { return paths_.front().nu(); }

 private:
  std::uint64_t seed_;
  std::vector<BrownianPath> paths_;
};

Ensemble sample_paths(std::size_t m, double T, double dt, double nu, std::uint64_t seed);

// f(x + c) by exact phase shift; Nyquist content is dropped
ScalarField shift_field(const ScalarField& f, Point c);
VectorField shift_field(const VectorField& v, Point c);

struct FlowPair {
  FlowMap forward;   // X^nu_t
  FlowMap backward;  // A^nu_t
};

// Characteristics of the randomly shifted ODE dX/dt = u(t, X + sqrt(2 nu) W_t) from 0 to t;
// X^nu = X + sqrt(2 nu) W_t and A^nu = A(. - sqrt(2 nu) W_t).
FlowPair stochastic_flow_pair(const TimeSampledVelocity& u, const BrownianPath& path, double t, double dt,
                              FlowOptions opts = {});

// Streaming sum with a fixed binary reduction tree: the result depends only on the order of add() calls.
class PairwiseSum {
 public:
  explicit PairwiseSum(std::size_t length) : length_(length) {}
  void add(std::span<const double> x);
  std::vector<double> total() const;
  std::size_t count() const { return count_; }

 private:
  std::size_t length_;
  std::size_t count_ = 0;
  std::vector<std::optional<std::vector<double>>> levels_;
};

ScalarField ensemble_mean(std::span<const ScalarField> samples);
VectorField ensemble_mean(std::span<const VectorField> samples);

}  // namespace stochflow
