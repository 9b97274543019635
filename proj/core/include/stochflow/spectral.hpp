#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "stochflow/grid.hpp"

namespace stochflow {

using cplx = std::complex<double>;

// Half spectrum of a real field: n rows (ky) by n/2+1 columns (kx >= 0).
// Normalized so that f(x) = sum_k fhat_k exp(i k.x).
class Spectrum {
 public:
  explicit Spectrum(const Grid& g);

  const Grid& grid() const { return grid_; }
  int rows() const { return grid_.n(); }
  int cols() const { return grid_.n() / 2 + 1; }

  cplx& at(int iy, int ix) { return c_[static_cast<std::size_t>(iy) * cols() + ix]; }
  cplx at(int iy, int ix) const { return c_[static_cast<std::size_t>(iy) * cols() + ix]; }
  std::span<cplx> coeffs() { return c_; }
  std::span<const cplx> coeffs() const { return c_; }

  // signed wavenumbers for a storage position
  int ky(int iy) const { return iy < grid_.n() / 2 ? iy : iy - grid_.n(); }
  int kx(int ix) const { return ix; }
  bool nyquist(int iy, int ix) const { return iy == grid_.n() / 2 || ix == grid_.n() / 2; }
  // 2 for columns whose conjugate partner is implied, else 1
  double multiplicity(int ix) const { return (ix == 0 || ix == grid_.n() / 2) ? 1.0 : 2.0; }

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator*=(double a);

 private:
  Grid grid_;
  std::vector<cplx> c_;
};

Spectrum to_spectrum(const ScalarField& f);
ScalarField to_physical(const Spectrum& s);

// (2pi)^2 * sum over the full spectrum of |fhat|^2
double spectral_energy(const Spectrum& s);

// Fourier multipliers. Inverse and fractional symbols annihilate k = 0; heat_factor keeps the mean.
// Odd symbols (derivatives, biot_savart) and leray zero the Nyquist row/column.
struct SpectralMultiplier {
  enum class Kind { leray, biot_savart, fractional_laplacian, inverse_laplacian, heat_factor };
  Kind kind = Kind::leray;
  double exponent = 0;  // s in (-Delta)^s
  double nu = 0;
  double dt = 0;

  static SpectralMultiplier leray() { return {Kind::leray}; }
  static SpectralMultiplier biot_savart() { return {Kind::biot_savart}; }
  static SpectralMultiplier fractional_laplacian(double s) { return {Kind::fractional_laplacian, s}; }
  // Delta^{-1}, symbol -1/|k|^2
  static SpectralMultiplier inverse_laplacian() { return {Kind::inverse_laplacian}; }
  static SpectralMultiplier heat_factor(double nu, double dt) { return {Kind::heat_factor, 0, nu, dt}; }

  bool scalar_symbol() const {
    return kind == Kind::fractional_laplacian || kind == Kind::inverse_laplacian || kind == Kind::heat_factor;
  }
  // value of a scalar symbol at integer wavenumber
  double symbol(int kx, int ky) const;
};

ScalarField apply_multiplier(const SpectralMultiplier& m, const ScalarField& f);
VectorField apply_multiplier(const SpectralMultiplier& m, const VectorField& v);
void apply_multiplier(const SpectralMultiplier& m, Spectrum& s);

VectorField leray_project(const VectorField& v);
// curl(biot_savart(w)) = w on mean-free w; output divergence free and mean free
VectorField biot_savart(const ScalarField& w);

ScalarField partial_x(const ScalarField& f);
ScalarField partial_y(const ScalarField& f);
VectorField gradient(const ScalarField& f);
// (-d/dy, d/dx) f
VectorField perp_gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
// d_x v_y - d_y v_x
ScalarField curl2d(const VectorField& v);

struct Gradients {
  ScalarField dx;
  ScalarField dy;
};
// both partials from a single forward transform
Gradients gradients(const ScalarField& f);

struct HelmholtzParts {
  VectorField solenoidal;
  VectorField gradient;
  std::array<double, 2> mean{0, 0};
};
HelmholtzParts helmholtz_decompose(const VectorField& v);

// 2/3-rule truncation: zero modes with |kx| or |ky| >= n/3
void dealias(Spectrum& s);
ScalarField dealias(const ScalarField& f);
// u . grad f, dealiased
ScalarField advect(const VectorField& u, const ScalarField& f);
// (a . grad) b, dealiased
VectorField advect(const VectorField& a, const VectorField& b);

}  // namespace stochflow
