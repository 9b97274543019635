#include "stochflow/grid.hpp"

#include <algorithm>
#include <string>

namespace stochflow {

Grid::Grid(int n) : n_(n) {
  if (n < 16 || (n & (n - 1)) != 0)
    throw StructuralError("grid size must be a power of two >= 16, got " + std::to_string(n));
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b))
    throw StructuralError(std::string(where) + ": grid mismatch (" + std::to_string(a.n()) + " vs " +
                          std::to_string(b.n()) + ")");
}

ScalarField::ScalarField(const Grid& g, std::vector<double> values) : grid_(g), v_(std::move(values)) {
  if (v_.size() != g.size()) throw StructuralError("ScalarField: value count does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField +=");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField -=");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& x : v_) x *= a;
  return *this;
}

ScalarField& ScalarField::axpy(double a, const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField axpy");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += a * o.v_[i];
  return *this;
}

double ScalarField::mean() const {
  double s = 0;
  for (double x : v_) s += x;
  return s / static_cast<double>(v_.size());
}

bool ScalarField::all_finite() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField b) { return b *= a; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise product");
  ScalarField r(a.grid());
  for (std::size_t i = 0; i < a.grid().size(); ++i) r[i] = a[i] * b[i];
  return r;
}

VectorField::VectorField(ScalarField fx, ScalarField fy) : x(std::move(fx)), y(std::move(fy)) {
  require_same_grid(x.grid(), y.grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  x += o.x;
  y += o.y;
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  x -= o.x;
  y -= o.y;
  return *this;
}
VectorField& VectorField::operator*=(double a) {
  x *= a;
  y *= a;
  return *this;
}
VectorField& VectorField::axpy(double a, const VectorField& o) {
  x.axpy(a, o.x);
  y.axpy(a, o.y);
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double a, VectorField b) { return b *= a; }

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double s = 0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) s += a[i] * b[i];
  const double h = a.grid().spacing();
  return s * h * h;
}

double inner(const VectorField& a, const VectorField& b) { return inner(a.x, b.x) + inner(a.y, b.y); }
double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }
double l2_norm(const VectorField& v) { return std::sqrt(inner(v, v)); }

double max_abs(const ScalarField& f) {
  double m = 0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const VectorField& v) { return std::max(max_abs(v.x), max_abs(v.y)); }

ScalarField dot(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  ScalarField r(a.grid());
  for (std::size_t i = 0; i < r.grid().size(); ++i) r[i] = a.x[i] * b.x[i] + a.y[i] * b.y[i];
  return r;
}

}  // namespace stochflow
