#pragma once

#include <array>
#include <string>
#include <vector>

#include "stochflow/flow_map.hpp"
#include "stochflow/grid.hpp"

namespace stochflow {

// Closed curve sampled at a uniform parameter s_i = 2 pi i / P, in unwrapped coordinates.
// winding (a, b): one traversal moves the curve by (2 pi a, 2 pi b).
class MaterialLoop {
 public:
  static constexpr std::size_t kMinNodes = 64;
  // spacing bound, in grid spacings
  static constexpr double kMaxSpacing = 4.0;

  MaterialLoop(std::vector<Point> nodes, std::array<int, 2> winding = {0, 0}, std::string name = {});
  static MaterialLoop circle(Point center, double radius, std::size_t nodes, std::string name = {});
  // y = y0, traversed in +x; winding (1, 0)
  static MaterialLoop horizontal(double y0, std::size_t nodes, std::string name = {});

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  std::array<int, 2> winding() const { return winding_; }
  const std::string& name() const { return name_; }
  double max_spacing() const;
  bool resolved(const Grid& g) const { return max_spacing() <= kMaxSpacing * g.spacing(); }
  // dX/ds at each node, spectrally from the periodic part of the parametrization
  std::vector<Point> tangents() const;
  // twice the nodes, new ones on the trigonometric interpolant of the parametrization
  MaterialLoop refined() const;

 private:
  std::vector<Point> nodes_;
  std::array<int, 2> winding_;
  std::string name_;
};

// Closed line integral of w: trapezoid rule in s with spectral tangents. Throws if the loop is under-resolved.
double circulation(const VectorField& w, const MaterialLoop& loop);

// Node images under X. While the image spacing exceeds the bound (grid of X), the source loop is refined first.
MaterialLoop advect_loop(const MaterialLoop& loop, const FlowMap& X, int max_refinements = 6);

}  // namespace stochflow
