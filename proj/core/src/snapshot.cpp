#include "stochflow/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace stochflow {
namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

void write_snapshot(const ScalarField& f, const std::string& base, SnapshotMeta meta) {
  meta.grid_n = f.grid().n();
  std::vector<char> bytes(8 * f.grid().size());
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    const std::uint64_t b = to_le(std::bit_cast<std::uint64_t>(f[i]));
    std::memcpy(bytes.data() + 8 * i, &b, 8);
  }
  std::ofstream bin(base + ".bin", std::ios::binary | std::ios::trunc);
  bin.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!bin) throw IoError("cannot write " + base + ".bin");

  const nlohmann::json j = {{"grid_n", meta.grid_n},         {"field_name", meta.field_name},
                            {"time", meta.time},             {"model", meta.model},
                            {"config_hash", meta.config_hash}, {"byte_order", meta.byte_order},
                            {"layout", meta.layout}};
  std::ofstream side(base + ".json", std::ios::trunc);
  side << j.dump(2) << "\n";
  if (!side) throw IoError("cannot write " + base + ".json");
}

FieldSnapshot read_snapshot(const std::string& base) {
  std::ifstream side(base + ".json");
  if (!side) throw IoError("cannot read " + base + ".json");
  SnapshotMeta meta;
  try {
    std::stringstream ss;
    ss << side.rdbuf();
    const auto j = nlohmann::json::parse(ss.str());
    meta.grid_n = j.at("grid_n").get<int>();
    meta.field_name = j.at("field_name").get<std::string>();
    meta.time = j.at("time").get<double>();
    meta.model = j.at("model").get<std::string>();
    meta.config_hash = j.at("config_hash").get<std::string>();
    meta.byte_order = j.at("byte_order").get<std::string>();
    meta.layout = j.at("layout").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt snapshot metadata " + base + ".json: " + e.what());
  }
  if (meta.byte_order != "LE" || meta.layout != "row-major-yx")
    throw IoError("unsupported snapshot encoding in " + base + ".json");
  std::optional<Grid> g;
  try {
    g.emplace(meta.grid_n);
  } catch (const StructuralError&) {
    throw IoError("invalid grid_n in " + base + ".json");
  }

  std::ifstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw IoError("cannot read " + base + ".bin");
  std::vector<char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  if (bytes.size() != 8 * g->size())
    throw IoError("snapshot length mismatch: " + base + ".bin holds " + std::to_string(bytes.size()) +
                  " bytes, grid_n = " + std::to_string(meta.grid_n) + " needs " + std::to_string(8 * g->size()));
  ScalarField f(*g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    std::uint64_t b;
    std::memcpy(&b, bytes.data() + 8 * i, 8);
    f[i] = std::bit_cast<double>(to_le(b));
  }
  return {std::move(f), std::move(meta)};
}

}  // namespace stochflow
