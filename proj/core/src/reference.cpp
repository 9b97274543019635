#include "stochflow/reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochflow/spectral.hpp"

namespace stochflow {
namespace {

using Coeffs = std::vector<Spectrum>;

enum class Deriv { x, y };

Spectrum derivative(const Spectrum& s, Deriv d) {
  Spectrum r(s.grid());
  for (int iy = 0; iy < s.rows(); ++iy)
    for (int ix = 0; ix < s.cols(); ++ix) {
      if (s.nyquist(iy, ix)) continue;
      const double k = d == Deriv::x ? ix : s.ky(iy);
      r.at(iy, ix) = cplx(0, k) * s.at(iy, ix);
    }
  return r;
}

// components of (-Lap)^alpha biot_savart(q): (i ky, -i kx) q / |k|^2 * |k|^{2 alpha}
std::pair<Spectrum, Spectrum> velocity_spectra(const Spectrum& q, double alpha) {
  Spectrum ux(q.grid()), uy(q.grid());
  for (int iy = 0; iy < q.rows(); ++iy) {
    const int ky = q.ky(iy);
    for (int ix = 0; ix < q.cols(); ++ix) {
      const double k2 = static_cast<double>(ix) * ix + static_cast<double>(ky) * ky;
      if (k2 == 0 || q.nyquist(iy, ix)) continue;
      const double s = (alpha == 0 ? 1.0 : std::pow(k2, alpha)) / k2;
      ux.at(iy, ix) = cplx(0, ky * s) * q.at(iy, ix);
      uy.at(iy, ix) = cplx(0, -ix * s) * q.at(iy, ix);
    }
  }
  return {std::move(ux), std::move(uy)};
}

Spectrum dealiased_spectrum(const ScalarField& f) {
  Spectrum s = to_spectrum(f);
  dealias(s);
  return s;
}

struct Physical {
  ScalarField x, y;
};

Physical physical_gradient(const Spectrum& s) {
  return {to_physical(derivative(s, Deriv::x)), to_physical(derivative(s, Deriv::y))};
}

// pointwise a.x * b.x + a.y * b.y
ScalarField dot(const Physical& a, const Physical& b) {
  ScalarField r(a.x.grid());
  for (std::size_t i = 0; i < r.grid().size(); ++i) r[i] = a.x[i] * b.x[i] + a.y[i] * b.y[i];
  return r;
}

class Tendency {
 public:
  explicit Tendency(const ModelSpec& m) : m_(m) {}

  Coeffs operator()(const Coeffs& c) const { return m_.boussinesq() ? boussinesq(c) : gsqg(c); }

 private:
  Coeffs gsqg(const Coeffs& c) const {
    auto [ux, uy] = velocity_spectra(c[0], m_.alpha);
    const Physical u{to_physical(ux), to_physical(uy)};
    ScalarField adv = dot(u, physical_gradient(c[0]));
    adv *= -1.0;
    Coeffs r;
    r.push_back(dealiased_spectrum(adv));
    return r;
  }

  Coeffs boussinesq(const Coeffs& c) const {
    const Spectrum &w = c[0], &th = c[1], &j = c[2];
    auto [uxs, uys] = velocity_spectra(w, 0);
    auto [bxs, bys] = velocity_spectra(j, 0);
    const Physical u{to_physical(uxs), to_physical(uys)};
    const Physical B{to_physical(bxs), to_physical(bys)};
    const Physical gw = physical_gradient(w), gth = physical_gradient(th), gj = physical_gradient(j);
    const Physical gux = physical_gradient(uxs), guy = physical_gradient(uys);
    const Physical gbx = physical_gradient(bxs), gby = physical_gradient(bys);

    const Grid& g = w.grid();
    ScalarField nw(g), nth(g), nj(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      nw[i] = -(u.x[i] * gw.x[i] + u.y[i] * gw.y[i]) + (B.x[i] * gj.x[i] + B.y[i] * gj.y[i]);
      nth[i] = -(u.x[i] * gth.x[i] + u.y[i] * gth.y[i]);
      const double q = 2.0 * (gbx.x[i] * gux.y[i] - gbx.y[i] * gux.x[i] + gby.x[i] * guy.y[i] - gby.y[i] * guy.x[i]);
      nj[i] = -(u.x[i] * gj.x[i] + u.y[i] * gj.y[i]) + (B.x[i] * gw.x[i] + B.y[i] * gw.y[i]) + q;
    }
    Coeffs r;
    r.push_back(dealiased_spectrum(nw));
    r.back() += derivative(th, Deriv::x);
    r.push_back(dealiased_spectrum(nth));
    r.push_back(dealiased_spectrum(nj));
    return r;
  }

  ModelSpec m_;
};

// c <- E(h) c, with E the heat factor exp(-nu |k|^2 h)
Coeffs heat(const Coeffs& c, double nu, double h) {
  Coeffs r = c;
  if (nu == 0) return r;
  const SpectralMultiplier e = SpectralMultiplier::heat_factor(nu, h);
  for (auto& s : r) apply_multiplier(e, s);
  return r;
}

// a + h b, component-wise
Coeffs axpy(const Coeffs& a, double h, const Coeffs& b) {
  Coeffs r = a;
  for (std::size_t k = 0; k < r.size(); ++k) {
    auto rc = r[k].coeffs();
    auto bc = b[k].coeffs();
    for (std::size_t i = 0; i < rc.size(); ++i) rc[i] += h * bc[i];
  }
  return r;
}

bool finite(const Coeffs& c) {
  for (const auto& s : c)
    for (const auto& z : s.coeffs())
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

Coeffs lawson_rk4(const Tendency& N, const Coeffs& c, double nu, double h) {
  const Coeffs k1 = N(c);
  const Coeffs k2 = N(heat(axpy(c, 0.5 * h, k1), nu, 0.5 * h));
  const Coeffs k3 = N(axpy(heat(c, nu, 0.5 * h), 0.5 * h, k2));
  const Coeffs k4 = N(axpy(heat(c, nu, h), h, heat(k3, nu, 0.5 * h)));
  Coeffs acc = axpy(heat(k1, nu, h), 2.0, heat(axpy(k2, 1.0, k3), nu, 0.5 * h));
  acc = axpy(acc, 1.0, k4);
  return axpy(heat(c, nu, h), h / 6.0, acc);
}

Coeffs to_coeffs(const ModelSpec& m, const FluidState& s) {
  Coeffs c;
  if (!m.boussinesq()) {
    c.push_back(to_spectrum(curl2d(momentum(m, s.u))));
    return c;
  }
  const Grid& g = s.grid();
  c.push_back(to_spectrum(curl2d(s.u)));
  c.push_back(to_spectrum(s.theta ? *s.theta : ScalarField(g)));
  c.push_back(to_spectrum(s.B ? curl2d(*s.B) : ScalarField(g)));
  return c;
}

FluidState to_state(const ModelSpec& m, const Coeffs& c, double t) {
  if (!m.boussinesq()) return FluidState::make(t, velocity_from_active_scalar(m, to_physical(c[0])));
  return FluidState::make(t, biot_savart(to_physical(c[0])), to_physical(c[1]), biot_savart(to_physical(c[2])));
}

long whole_steps(double span, double dt, const char* what) {
  const long n = std::lround(span / dt);
  if (n < 1 || std::abs(static_cast<double>(n) * dt - span) > 1e-9 * std::max(1.0, span))
    throw StructuralError(std::string("reference_solve: dt must divide ") + what);
  return n;
}

}  // namespace

double cfl_number(const FluidState& s, double dt) {
  double speed = max_abs(s.u.x) + max_abs(s.u.y);
  if (s.B) speed += max_abs(s.B->x) + max_abs(s.B->y);
  return dt * speed * (s.grid().n() / 2);
}

std::vector<FluidState> reference_solve(const ModelSpec& model, const FluidState& initial, double T, double dt,
                                        const ReferenceOptions& opts) {
  if (!(dt > 0) || !(T > 0)) throw StructuralError("reference_solve: T and dt must be positive");
  const long steps = whole_steps(T, dt, "T");
  const long stride = opts.output_dt > 0 ? whole_steps(opts.output_dt, dt, "output_dt") : steps;
  if (!initial.u.all_finite()) throw NumericalError("reference_solve: non-finite initial data");

  Coeffs c = to_coeffs(model, initial);
  std::vector<FluidState> out;
  out.push_back(to_state(model, c, initial.t));
  const double cfl = cfl_number(out.back(), dt);
  if (cfl > opts.cfl_limit)
    throw NumericalError("reference_solve: CFL number " + std::to_string(cfl) + " exceeds " +
                         std::to_string(opts.cfl_limit) + "; reduce dt");

  const Tendency N(model);
  for (long k = 1; k <= steps; ++k) {
    c = lawson_rk4(N, c, model.nu, dt);
    const double t = initial.t + dt * static_cast<double>(k);
    if (!finite(c)) throw NumericalError("reference_solve: non-finite state at t = " + std::to_string(t));
    if (k % stride == 0 || k == steps) out.push_back(to_state(model, c, t));
  }
  return out;
}

}  // namespace stochflow
