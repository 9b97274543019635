#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stochflow/grid.hpp"
#include "stochflow/spectral.hpp"

namespace stochflow {

// gsqg(alpha): d_t q + u.grad q = nu Lap q with q = curl(T u), T = (-Lap)^{-alpha}.
// boussinesq_mhd: unit Prandtl Boussinesq convection with magnetic field, buoyancy along e_y.
struct ModelSpec {
  enum class Kind { gsqg, boussinesq_mhd };
  Kind kind = Kind::gsqg;
  double alpha = 0;
  double nu = 0;

  static ModelSpec gsqg(double alpha, double nu);
  static ModelSpec navier_stokes(double nu) { return gsqg(0, nu); }
  static ModelSpec euler() { return gsqg(0, 0); }
  static ModelSpec boussinesq_mhd(double nu);

  bool boussinesq() const { return kind == Kind::boussinesq_mhd; }
  // the inertia operator T and its inverse; alpha = 0 gives the mean-free identity
  SpectralMultiplier inertia() const { return SpectralMultiplier::fractional_laplacian(-alpha); }
  SpectralMultiplier inverse_inertia() const { return SpectralMultiplier::fractional_laplacian(alpha); }
  std::string name() const;
};

// xi = T u
VectorField momentum(const ModelSpec& m, const VectorField& u);
// u = T^{-1} P xi
VectorField velocity_from_momentum(const ModelSpec& m, const VectorField& xi);
// velocity of the gsqg active scalar: (-Lap)^alpha biot_savart(q)
VectorField velocity_from_active_scalar(const ModelSpec& m, const ScalarField& q);
// 1/2 <T u, u>
double energy(const ModelSpec& m, const VectorField& u);

struct FluidState {
  double t = 0;
  VectorField u;
  ScalarField omega;  // curl2d(u)
  std::optional<ScalarField> theta;
  std::optional<VectorField> B;
  std::optional<ScalarField> j;  // curl2d(B)

  // omega (and j) derived from u (and B)
  static FluidState make(double t, VectorField u, std::optional<ScalarField> theta = {},
                         std::optional<VectorField> B = {});
  const Grid& grid() const { return u.grid(); }
};

struct SolveReport {
  // successive-iterate differences, all windows in order
  std::vector<double> iterates;
  std::vector<std::size_t> window_iterations;
  // relative ensemble standard errors at the final time, by quantity
  std::vector<std::pair<std::string, double>> mc_stats;
  double wall_time = 0;
  bool converged = false;

  double mc_stat(const std::string& name) const;
};

}  // namespace stochflow
