#pragma once

#include <memory>
#include <span>
#include <vector>

#include "stochflow/grid.hpp"

namespace stochflow {

// Off-grid evaluation of the trigonometric interpolant of one or more fields on a common grid.
// The spectrum is zero-padded onto an 8x finer grid (exact interpolant values there), and points
// are evaluated with a local 8-point Lagrange stencil per axis on that fine grid. For a mode of
// wavenumber k the error is about 1e-3 * (k h / 8)^8 relative, h the coarse spacing.
// Nyquist content of the coarse field is dropped. Immutable and cheap to copy.
class SpectralInterpolant {
 public:
  static constexpr int kOversample = 8;
  static constexpr int kStencil = 8;

  SpectralInterpolant() = default;
  explicit SpectralInterpolant(const ScalarField& f);
  explicit SpectralInterpolant(const VectorField& v);
  explicit SpectralInterpolant(const std::vector<const ScalarField*>& fields);

  // (1 - lambda) a + lambda b, component by component
  static SpectralInterpolant blend(const SpectralInterpolant& a, const SpectralInterpolant& b, double lambda);

  bool empty() const { return comps_.empty(); }
  int components() const { return static_cast<int>(comps_.size()); }
  int coarse_n() const { return n_; }

  // out[c] for each component c
  void evaluate(Point p, double* out) const;
  double value(Point p) const;
  Point vector_value(Point p) const;
  // out[c * pts.size() + i]
  void evaluate(std::span<const Point> pts, std::span<double> out) const;

 private:
  int n_ = 0;       // coarse size
  int fine_ = 0;    // fine size N
  int stride_ = 0;  // padded row length
  std::vector<std::shared_ptr<const std::vector<double>>> comps_;
};

std::vector<double> interpolate_field(const ScalarField& f, std::span<const Point> pts);
std::vector<Point> interpolate_field(const VectorField& v, std::span<const Point> pts);

}  // namespace stochflow
