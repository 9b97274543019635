#pragma once

// One window of the stochastic Lagrangian fixed-point map, evaluated path by path.

#include <optional>
#include <span>
#include <vector>

#include "stochflow/ensemble.hpp"
#include "stochflow/interpolation.hpp"
#include "stochflow/model.hpp"

namespace stochflow::detail {

// Values at stamps t0 + j dt, j = 0..S. theta and B are empty for unforced models.
struct Iterate {
  std::vector<VectorField> u;
  std::vector<ScalarField> theta;
  std::vector<VectorField> B;
};

// averaged: lerp the iterate in time, evaluate at y + s(t).
// shifted: lerp V_j = u_j(. + s_j) in time, evaluate at y. For single paths whose velocity is
// rough in time but smooth in the co-moving frame.
enum class Frame { averaged, shifted };

struct WindowSpec {
  double t0 = 0;
  double dt = 0;
  std::size_t stamps = 1;  // S
  Frame frame = Frame::averaged;
  std::size_t block = 32;
};

struct MapResult {
  Iterate next;
  // relative ensemble standard error per stamp (index 0 is zero)
  std::vector<double> se_u, se_theta, se_B;
};

class WindowMap {
 public:
  WindowMap(const ModelSpec& model, const WindowSpec& win, const VectorField& u_start,
            const std::optional<ScalarField>& theta_start, const std::optional<VectorField>& B_start);

  bool forced() const { return forced_; }
  MapResult apply(const Iterate& it, std::span<const BrownianPath> paths) const;

 private:
  struct Shared;
  std::vector<double> path_samples(const Shared& sh, const Iterate& it, const BrownianPath& path) const;

  ModelSpec model_;
  WindowSpec win_;
  Grid grid_;
  bool forced_;
  VectorField u_start_;
  std::optional<ScalarField> theta_start_;
  std::optional<VectorField> B_start_;
  SpectralInterpolant xi_;     // momentum at the window start
  SpectralInterpolant tb_;     // theta, B_x, B_y at the window start (forced only)
  std::size_t nc_;             // doubles per spectral layer (re, im)
  std::size_t per_stamp_;      // doubles per stamp sample
};

// root-sum-square over quantities of relative L2 differences, sup over stamps
double iterate_difference(const Iterate& a, const Iterate& b);

}  // namespace stochflow::detail
