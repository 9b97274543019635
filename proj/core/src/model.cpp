#include "stochflow/model.hpp"

#include <sstream>

namespace stochflow {

ModelSpec ModelSpec::gsqg(double alpha, double nu) {
  if (!(alpha >= 0 && alpha <= 1)) throw StructuralError("gsqg: alpha must lie in [0, 1]");
  if (!(nu >= 0)) throw StructuralError("model: nu must be nonnegative");
  return {Kind::gsqg, alpha, nu};
}

ModelSpec ModelSpec::boussinesq_mhd(double nu) {
  if (!(nu >= 0)) throw StructuralError("model: nu must be nonnegative");
  return {Kind::boussinesq_mhd, 0, nu};
}

std::string ModelSpec::name() const {
  std::ostringstream s;
  if (boussinesq())
    s << "boussinesq_mhd(nu=" << nu << ")";
  else
    s << "gsqg(alpha=" << alpha << ", nu=" << nu << ")";
  return s.str();
}

VectorField momentum(const ModelSpec& m, const VectorField& u) { return apply_multiplier(m.inertia(), u); }

VectorField velocity_from_momentum(const ModelSpec& m, const VectorField& xi) {
  VectorField p = leray_project(xi);
  if (m.alpha == 0) return p;
  return apply_multiplier(m.inverse_inertia(), p);
}

VectorField velocity_from_active_scalar(const ModelSpec& m, const ScalarField& q) {
  VectorField u = biot_savart(q);
  if (m.alpha == 0) return u;
  return apply_multiplier(m.inverse_inertia(), u);
}

double energy(const ModelSpec& m, const VectorField& u) { return 0.5 * inner(momentum(m, u), u); }

FluidState FluidState::make(double t, VectorField u, std::optional<ScalarField> theta, std::optional<VectorField> B) {
  ScalarField w = curl2d(u);
  std::optional<ScalarField> j;
  if (B) {
    require_same_grid(u.grid(), B->grid(), "FluidState");
    j = curl2d(*B);
  }
  if (theta) require_same_grid(u.grid(), theta->grid(), "FluidState");
  return FluidState{t, std::move(u), std::move(w), std::move(theta), std::move(B), std::move(j)};
}

double SolveReport::mc_stat(const std::string& name) const {
  for (const auto& [k, v] : mc_stats)
    if (k == name) return v;
  return 0.0;
}

}  // namespace stochflow
