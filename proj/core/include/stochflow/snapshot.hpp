#pragma once

#include <string>

#include "stochflow/grid.hpp"

namespace stochflow {

struct SnapshotMeta {
  int grid_n = 0;
  std::string field_name;
  double time = 0;
  std::string model;
  std::string config_hash;
  std::string byte_order = "LE";
  std::string layout = "row-major-yx";
};

struct FieldSnapshot {
  ScalarField field;
  SnapshotMeta meta;
};

// <base>.bin: n*n little-endian float64, y-major then x. <base>.json: the metadata.
// grid_n in meta is taken from the field.
void write_snapshot(const ScalarField& f, const std::string& base, SnapshotMeta meta);
// throws IoError on missing files, corrupt metadata or a payload that does not match grid_n
FieldSnapshot read_snapshot(const std::string& base);

}  // namespace stochflow
