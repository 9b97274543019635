#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "stochflow/errors.hpp"

namespace stochflow {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform n x n grid on [0, 2pi)^2. n is a power of two, at least 16.
class Grid {
 public:
  explicit Grid(int n);

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
  double spacing() const { return kTwoPi / n_; }
  double coord(int i) const { return kTwoPi * i / n_; }
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * n_ + ix; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_; }

 private:
  int n_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Values stored row-major, y-major then x: values[iy * n + ix].
class ScalarField {
 public:
  explicit ScalarField(const Grid& g) : grid_(g), v_(g.size(), 0.0) {}
  ScalarField(const Grid& g, std::vector<double> values);

  template <class F>
  static ScalarField from_function(const Grid& g, F&& f) {
    ScalarField s(g);
    for (int iy = 0; iy < g.n(); ++iy)
      for (int ix = 0; ix < g.n(); ++ix) s(ix, iy) = f(g.coord(ix), g.coord(iy));
    return s;
  }

  const Grid& grid() const { return grid_; }
  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  double& operator()(int ix, int iy) { return v_[grid_.index(ix, iy)]; }
  double operator()(int ix, int iy) const { return v_[grid_.index(ix, iy)]; }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
  // this += a * o
  ScalarField& axpy(double a, const ScalarField& o);

  double mean() const;
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);  // pointwise, no dealiasing

struct VectorField {
  ScalarField x;
  ScalarField y;

  explicit VectorField(const Grid& g) : x(g), y(g) {}
  VectorField(ScalarField fx, ScalarField fy);

  template <class F>
  static VectorField from_function(const Grid& g, F&& f) {
    VectorField v(g);
    for (int iy = 0; iy < g.n(); ++iy)
      for (int ix = 0; ix < g.n(); ++ix) {
        auto [a, b] = f(g.coord(ix), g.coord(iy));
        v.x(ix, iy) = a;
        v.y(ix, iy) = b;
      }
    return v;
  }

  const Grid& grid() const { return x.grid(); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);
  VectorField& axpy(double a, const VectorField& o);
  bool all_finite() const { return x.all_finite() && y.all_finite(); }
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double a, VectorField b);

// Integrals over the periodic box, i.e. grid sums times the cell area.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
double max_abs(const ScalarField& f);
double max_abs(const VectorField& v);
ScalarField dot(const VectorField& a, const VectorField& b);

}  // namespace stochflow
