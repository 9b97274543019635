#include "stochflow/presets.hpp"

#include <cmath>
#include <set>

#include "stochflow/random.hpp"
#include "stochflow/spectral.hpp"

namespace stochflow {
namespace {

double param(const PresetSpec& p, const std::string& key, double fallback) {
  const auto it = p.params.find(key);
  return it == p.params.end() ? fallback : it->second;
}

void allow_only(const PresetSpec& p, std::set<std::string> keys) {
  for (const auto& [k, v] : p.params)
    if (!keys.count(k)) throw StructuralError("preset " + p.name + ": unknown parameter " + k);
}

// mean-free field with unit-variance Gaussian coefficients on 0 < |k| <= k_max
ScalarField random_modes(const Grid& g, double kmax, std::uint64_t seed) {
  if (!(kmax >= 1) || kmax >= g.n() / 3) throw StructuralError("random-band-limited: need 1 <= k_max < n/3");
  Spectrum s(g);
  std::uint64_t stream = 0;
  for (int iy = 0; iy < s.rows(); ++iy)
    for (int ix = 0; ix < s.cols(); ++ix) {
      const int ky = s.ky(iy);
      if (ix == 0 && ky <= 0) continue;  // conjugate partners and the mean
      if (ix * ix + ky * ky > kmax * kmax) continue;
      const auto z = gaussian_pair(seed, stream++, 0);
      s.at(iy, ix) = cplx(z[0], z[1]);
      if (ix == 0) s.at(g.n() - iy, 0) = std::conj(s.at(iy, ix));
    }
  return to_physical(s);
}

double rms(const ScalarField& f) { return l2_norm(f) / kTwoPi; }

}  // namespace

VectorField velocity_preset(const Grid& g, const PresetSpec& p) {
  using std::cos;
  using std::sin;
  if (p.name == "zero") {
    allow_only(p, {});
    return VectorField(g);
  }
  if (p.name == "taylor-green") {
    allow_only(p, {"amplitude"});
    const double A = param(p, "amplitude", 1);
    return VectorField::from_function(g, [A](double x, double y) { return std::pair{-A * sin(x) * cos(y), A * cos(x) * sin(y)}; });
  }
  if (p.name == "shear") {
    allow_only(p, {"amplitude", "k"});
    const double A = param(p, "amplitude", 1), k = param(p, "k", 1);
    if (k != std::round(k) || k == 0) throw StructuralError("shear: k must be a nonzero integer");
    return VectorField::from_function(g, [A, k](double, double y) { return std::pair{A * sin(k * y), 0.0}; });
  }
  if (p.name == "single-mode") {
    allow_only(p, {"kx", "ky", "amplitude"});
    const double kx = param(p, "kx", 1), ky = param(p, "ky", 0), A = param(p, "amplitude", 1);
    const double k = std::hypot(kx, ky);
    if (kx != std::round(kx) || ky != std::round(ky) || k == 0) throw StructuralError("single-mode: nonzero integer k");
    return VectorField::from_function(g, [=](double x, double y) {
      const double s = A * sin(kx * x + ky * y) / k;
      return std::pair{-ky * s, kx * s};
    });
  }
  if (p.name == "random-band-limited") {
    allow_only(p, {"k_max", "seed", "amplitude"});
    VectorField u = biot_savart(random_modes(g, param(p, "k_max", 4), static_cast<std::uint64_t>(param(p, "seed", 1))));
    const double r = std::hypot(rms(u.x), rms(u.y));
    return (param(p, "amplitude", 1) / r) * u;
  }
  throw StructuralError("unknown velocity preset '" + p.name + "'");
}

ScalarField scalar_preset(const Grid& g, const PresetSpec& p) {
  if (p.name == "zero") {
    allow_only(p, {});
    return ScalarField(g);
  }
  if (p.name == "constant") {
    allow_only(p, {"value"});
    const double v = param(p, "value", 0);
    return ScalarField::from_function(g, [v](double, double) { return v; });
  }
  if (p.name == "single-mode") {
    allow_only(p, {"kx", "ky", "amplitude"});
    const double kx = param(p, "kx", 1), ky = param(p, "ky", 0), A = param(p, "amplitude", 1);
    return ScalarField::from_function(g, [=](double x, double y) { return A * std::cos(kx * x + ky * y); });
  }
  if (p.name == "random-band-limited") {
    allow_only(p, {"k_max", "seed", "amplitude"});
    ScalarField f = random_modes(g, param(p, "k_max", 4), static_cast<std::uint64_t>(param(p, "seed", 1)));
    return (param(p, "amplitude", 1) / rms(f)) * f;
  }
  throw StructuralError("unknown scalar preset '" + p.name + "'");
}

}  // namespace stochflow
