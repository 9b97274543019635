#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochflow/grid.hpp"
#include "stochflow/loop.hpp"
#include "stochflow/model.hpp"
#include "stochflow/presets.hpp"

namespace stochflow {

struct LoopSpec {
  std::string kind = "circle";  // circle | horizontal
  std::string name;
  Point center{kTwoPi / 2, kTwoPi / 2};
  double radius = 1;
  double y0 = kTwoPi / 2;
  std::size_t nodes = 256;
  MaterialLoop build() const;
  friend bool operator==(const LoopSpec&, const LoopSpec&) = default;
};

// Document format: JSON. Every key is optional; defaults are listed in the README.
struct RunConfig {
  int grid_n = 64;

  double T = 1;
  double dt = 0.01;           // stochastic stamp spacing, picard and shifted-euler step
  double window = 0;          // 0: one window
  double reference_dt = 1e-3;
  double output_dt = 0;       // 0: dt for stochastic runs, T / 10 for reference runs

  std::string model_kind = "gsqg";  // gsqg | navier_stokes | euler | boussinesq_mhd
  double alpha = 0;
  double nu = 0.01;

  std::size_t m = 400;
  std::uint64_t seed = 1;
  double ensemble_dt = 0;  // 0: dt / 2

  double tol = 1e-6;
  std::size_t max_iter = 25;
  double window_fraction = 0.5;
  double time_constant = 0.5;

  PresetSpec initial{"taylor-green", {}};
  std::string snapshot;  // prefix of a written snapshot set; overrides the preset
  PresetSpec theta{"zero", {}};
  PresetSpec magnetic{"zero", {}};

  std::vector<LoopSpec> loops;

  std::string directory = "out";
  std::size_t snapshot_stride = 0;  // every k-th output time; 0: final only
  std::vector<std::string> formats{"csv", "snapshot"};
  std::size_t tracked_paths = 8;

  std::string study_parameter = "m";  // m | dt
  std::vector<double> study_values{100, 400, 1600};
  std::size_t study_seeds = 1;

  ModelSpec model() const;
  Grid grid() const { return Grid(grid_n); }
  bool wants(const std::string& format) const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// throws ConfigError carrying the dotted key path
RunConfig parse_config(const std::string& document);
RunConfig load_config(const std::string& path);
// fully resolved, every default written out, stable key order
std::string serialize_config(const RunConfig& c);
// FNV-1a 64 of serialize_config with output.directory reset, as 16 hex digits
std::string config_hash(const RunConfig& c);

}  // namespace stochflow
