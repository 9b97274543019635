#pragma once

#include <map>
#include <string>

#include "stochflow/grid.hpp"

namespace stochflow {

struct PresetSpec {
  std::string name;
  std::map<std::string, double> params;
  friend bool operator==(const PresetSpec&, const PresetSpec&) = default;
};

// Velocity presets, all divergence free and mean free:
//   taylor-green  {amplitude=1}               A (-sin x cos y, cos x sin y)
//   shear         {amplitude=1, k=1}          (A sin(k y), 0)
//   single-mode   {kx=1, ky=0, amplitude=1}   A (-ky, kx) sin(kx x + ky y) / |k|
//   random-band-limited {k_max=4, seed=1, amplitude=1}  biot_savart of random modes 0 < |k| <= k_max, rms speed A
//   zero
VectorField velocity_preset(const Grid& g, const PresetSpec& p);

// Scalar presets: zero, constant {value}, single-mode {kx, ky, amplitude} (A cos(kx x + ky y)),
// random-band-limited {k_max, seed, amplitude} (rms A, mean free)
ScalarField scalar_preset(const Grid& g, const PresetSpec& p);

}  // namespace stochflow
