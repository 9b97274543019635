#include "stochflow/spectral.hpp"

#include <cmath>

#include "fft.hpp"

namespace stochflow {

Spectrum::Spectrum(const Grid& g) : grid_(g), c_(static_cast<std::size_t>(g.n()) * (g.n() / 2 + 1)) {}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  require_same_grid(grid_, o.grid_, "Spectrum +=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(double a) {
  for (auto& c : c_) c *= a;
  return *this;
}

Spectrum to_spectrum(const ScalarField& f) {
  Spectrum s(f.grid());
  detail::forward_r2c(f.grid().n(), f.data(), s.coeffs().data());
  const double norm = 1.0 / static_cast<double>(f.grid().size());
  for (auto& c : s.coeffs()) c *= norm;
  return s;
}

ScalarField to_physical(const Spectrum& s) {
  ScalarField f(s.grid());
  detail::inverse_c2r(s.grid().n(), s.coeffs().data(), f.data());
  return f;
}

double spectral_energy(const Spectrum& s) {
  double e = 0;
  for (int iy = 0; iy < s.rows(); ++iy)
    for (int ix = 0; ix < s.cols(); ++ix) e += s.multiplicity(ix) * std::norm(s.at(iy, ix));
  return kTwoPi * kTwoPi * e;
}

double SpectralMultiplier::symbol(int kx, int ky) const {
  const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky;
  switch (kind) {
    case Kind::fractional_laplacian:
      if (k2 == 0) return 0.0;
      return exponent == 0 ? 1.0 : std::pow(k2, exponent);
    case Kind::inverse_laplacian:
      return k2 == 0 ? 0.0 : -1.0 / k2;
    case Kind::heat_factor:
      return std::exp(-nu * k2 * dt);
    default:
      throw StructuralError("multiplier has no scalar symbol");
  }
}

void apply_multiplier(const SpectralMultiplier& m, Spectrum& s) {
  if (!m.scalar_symbol()) throw StructuralError("apply_multiplier: symbol is not scalar");
  for (int iy = 0; iy < s.rows(); ++iy) {
    const int ky = s.ky(iy);
    for (int ix = 0; ix < s.cols(); ++ix) s.at(iy, ix) *= m.symbol(ix, ky);
  }
}

namespace {

void require_finite(const ScalarField& f, const char* where) {
  if (!f.all_finite()) throw NumericalError(std::string(where) + ": non-finite input");
}

}  // namespace

ScalarField apply_multiplier(const SpectralMultiplier& m, const ScalarField& f) {
  require_finite(f, "apply_multiplier");
  if (!m.scalar_symbol()) throw StructuralError("apply_multiplier: this symbol needs a vector field");
  Spectrum s = to_spectrum(f);
  apply_multiplier(m, s);
  return to_physical(s);
}

VectorField apply_multiplier(const SpectralMultiplier& m, const VectorField& v) {
  if (m.kind == SpectralMultiplier::Kind::leray) return leray_project(v);
  if (m.kind == SpectralMultiplier::Kind::biot_savart)
    throw StructuralError("apply_multiplier: biot_savart maps a scalar to a vector");
  return VectorField(apply_multiplier(m, v.x), apply_multiplier(m, v.y));
}

VectorField leray_project(const VectorField& v) {
  require_finite(v.x, "leray_project");
  require_finite(v.y, "leray_project");
  Spectrum a = to_spectrum(v.x), b = to_spectrum(v.y);
  for (int iy = 0; iy < a.rows(); ++iy) {
    const double ky = a.ky(iy);
    for (int ix = 0; ix < a.cols(); ++ix) {
      const double kx = ix;
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0 || a.nyquist(iy, ix)) {
        a.at(iy, ix) = b.at(iy, ix) = 0;
        continue;
      }
      const cplx kv = (kx * a.at(iy, ix) + ky * b.at(iy, ix)) / k2;
      a.at(iy, ix) -= kx * kv;
      b.at(iy, ix) -= ky * kv;
    }
  }
  return VectorField(to_physical(a), to_physical(b));
}

VectorField biot_savart(const ScalarField& w) {
  require_finite(w, "biot_savart");
  Spectrum s = to_spectrum(w);
  Spectrum ux(w.grid()), uy(w.grid());
  const cplx I(0, 1);
  for (int iy = 0; iy < s.rows(); ++iy) {
    const double ky = s.ky(iy);
    for (int ix = 0; ix < s.cols(); ++ix) {
      const double kx = ix;
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0 || s.nyquist(iy, ix)) continue;
      ux.at(iy, ix) = I * ky / k2 * s.at(iy, ix);
      uy.at(iy, ix) = -I * kx / k2 * s.at(iy, ix);
    }
  }
  return VectorField(to_physical(ux), to_physical(uy));
}

namespace {

// multiply by i*kx (axis 0) or i*ky (axis 1), zeroing Nyquist
Spectrum derivative(const Spectrum& s, int axis) {
  Spectrum d(s.grid());
  const cplx I(0, 1);
  for (int iy = 0; iy < s.rows(); ++iy) {
    const double k = axis == 0 ? 0 : s.ky(iy);
    for (int ix = 0; ix < s.cols(); ++ix) {
      if (s.nyquist(iy, ix)) continue;
      d.at(iy, ix) = I * (axis == 0 ? static_cast<double>(ix) : k) * s.at(iy, ix);
    }
  }
  return d;
}

}  // namespace

ScalarField partial_x(const ScalarField& f) { return to_physical(derivative(to_spectrum(f), 0)); }
ScalarField partial_y(const ScalarField& f) { return to_physical(derivative(to_spectrum(f), 1)); }

Gradients gradients(const ScalarField& f) {
  const Spectrum s = to_spectrum(f);
  return {to_physical(derivative(s, 0)), to_physical(derivative(s, 1))};
}

VectorField gradient(const ScalarField& f) {
  Gradients g = gradients(f);
  return VectorField(std::move(g.dx), std::move(g.dy));
}

VectorField perp_gradient(const ScalarField& f) {
  Gradients g = gradients(f);
  g.dy *= -1.0;
  return VectorField(std::move(g.dy), std::move(g.dx));
}

ScalarField divergence(const VectorField& v) {
  Spectrum a = derivative(to_spectrum(v.x), 0);
  a += derivative(to_spectrum(v.y), 1);
  return to_physical(a);
}

ScalarField curl2d(const VectorField& v) {
  Spectrum a = derivative(to_spectrum(v.y), 0);
  Spectrum b = derivative(to_spectrum(v.x), 1);
  b *= -1.0;
  a += b;
  return to_physical(a);
}

HelmholtzParts helmholtz_decompose(const VectorField& v) {
  HelmholtzParts p{leray_project(v), VectorField(v.grid()), {v.x.mean(), v.y.mean()}};
  p.gradient = v - p.solenoidal;
  for (double& x : p.gradient.x.values()) x -= p.mean[0];
  for (double& y : p.gradient.y.values()) y -= p.mean[1];
  return p;
}

void dealias(Spectrum& s) {
  const int n = s.grid().n();
  for (int iy = 0; iy < s.rows(); ++iy) {
    const int ky = std::abs(s.ky(iy));
    for (int ix = 0; ix < s.cols(); ++ix)
      if (3 * ky >= n || 3 * ix >= n) s.at(iy, ix) = 0;
  }
}

ScalarField dealias(const ScalarField& f) {
  Spectrum s = to_spectrum(f);
  dealias(s);
  return to_physical(s);
}

ScalarField advect(const VectorField& u, const ScalarField& f) {
  require_same_grid(u.grid(), f.grid(), "advect");
  const Gradients g = gradients(f);
  ScalarField r(f.grid());
  for (std::size_t i = 0; i < r.grid().size(); ++i) r[i] = u.x[i] * g.dx[i] + u.y[i] * g.dy[i];
  return dealias(r);
}

VectorField advect(const VectorField& a, const VectorField& b) { return VectorField(advect(a, b.x), advect(a, b.y)); }

}  // namespace stochflow
