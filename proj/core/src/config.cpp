#include "stochflow/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace stochflow {
namespace {

using json = nlohmann::json;

// Walks one JSON object, remembering which keys were read; finish() rejects the rest.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  const json* find(const std::string& k) {
    seen_.insert(k);
    const auto it = j_.find(k);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& k, double& out) {
    if (const json* v = find(k)) {
      if (!v->is_number()) throw ConfigError(key(k), "expected a number");
      out = v->get<double>();
    }
  }

  template <class U>
  void count(const std::string& k, U& out) {
    if (const json* v = find(k)) {
      if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0))
        throw ConfigError(key(k), "expected a nonnegative integer");
      out = static_cast<U>(v->get<std::uint64_t>());
    }
  }

  void text(const std::string& k, std::string& out) {
    if (const json* v = find(k)) {
      if (!v->is_string()) throw ConfigError(key(k), "expected a string");
      out = v->get<std::string>();
    }
  }

  std::optional<Section> sub(const std::string& k) {
    if (const json* v = find(k)) return Section(*v, key(k));
    return std::nullopt;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(key(k), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

// "a.b": v at the top level becomes {"a": {"b": v}}
json expand_dotted(const json& j) {
  if (!j.is_object()) throw ConfigError("", "the document must be a JSON object");
  json out = json::object();
  for (const auto& [k, v] : j.items()) {
    json* node = &out;
    std::string rest = k;
    for (std::size_t dot; (dot = rest.find('.')) != std::string::npos; rest = rest.substr(dot + 1)) {
      json& child = (*node)[rest.substr(0, dot)];
      if (child.is_null()) child = json::object();
      if (!child.is_object()) throw ConfigError(k, "conflicts with another key");
      node = &child;
    }
    if (node->contains(rest)) {
      if (!(*node)[rest].is_object() || !v.is_object()) throw ConfigError(k, "given twice");
      (*node)[rest].update(v);
    } else {
      (*node)[rest] = v;
    }
  }
  return out;
}

void read_preset(Section& s, PresetSpec& p, const std::string& name_key, bool vector_field) {
  s.text(name_key, p.name);
  if (const json* v = s.find("params")) {
    require(v->is_object(), s.key("params"), "expected an object");
    p.params.clear();
    for (const auto& [k, x] : v->items()) {
      require(x.is_number(), s.key("params." + k), "expected a number");
      p.params[k] = x.get<double>();
    }
  }
  try {
    const Grid g(64);
    if (vector_field)
      velocity_preset(g, p);
    else
      scalar_preset(g, p);
  } catch (const StructuralError& e) {
    throw ConfigError(s.key(name_key), e.what());
  }
}

json preset_json(const PresetSpec& p) {
  json j = {{"preset", p.name}, {"params", json::object()}};
  for (const auto& [k, v] : p.params) j["params"][k] = v;
  return j;
}

}  // namespace

MaterialLoop LoopSpec::build() const {
  if (kind == "circle") return MaterialLoop::circle(center, radius, nodes, name);
  return MaterialLoop::horizontal(y0, nodes, name);
}

ModelSpec RunConfig::model() const {
  if (model_kind == "boussinesq_mhd") return ModelSpec::boussinesq_mhd(nu);
  return ModelSpec::gsqg(alpha, nu);
}

bool RunConfig::wants(const std::string& f) const {
  for (const auto& x : formats)
    if (x == f) return true;
  return false;
}

RunConfig parse_config(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed document: ") + e.what());
  }
  doc = expand_dotted(doc);
  RunConfig c;
  Section top(doc, "");

  if (auto s = top.sub("grid")) {
    s->count("n", c.grid_n);
    s->finish();
  }
  try {
    Grid g(c.grid_n);
  } catch (const StructuralError&) {
    throw ConfigError("grid.n", "must be a power of two, at least 16");
  }

  if (auto s = top.sub("time")) {
    s->number("T", c.T);
    s->number("dt", c.dt);
    s->number("window", c.window);
    s->number("reference_dt", c.reference_dt);
    s->number("output_dt", c.output_dt);
    s->finish();
  }
  require(c.T > 0, "time.T", "must be positive");
  require(c.dt > 0, "time.dt", "must be positive");
  require(c.window >= 0, "time.window", "must be nonnegative");
  require(c.reference_dt > 0, "time.reference_dt", "must be positive");
  require(c.output_dt >= 0, "time.output_dt", "must be nonnegative");

  bool nu_given = false;
  if (auto s = top.sub("model")) {
    s->text("kind", c.model_kind);
    s->number("alpha", c.alpha);
    nu_given = doc["model"].contains("nu");
    s->number("nu", c.nu);
    s->finish();
  }
  const std::set<std::string> kinds{"gsqg", "navier_stokes", "euler", "boussinesq_mhd"};
  require(kinds.count(c.model_kind) > 0, "model.kind", "must be one of gsqg, navier_stokes, euler, boussinesq_mhd");
  require(c.alpha >= 0 && c.alpha <= 1, "model.alpha", "must lie in [0, 1]");
  require(c.nu >= 0, "model.nu", "must be nonnegative");
  if (c.model_kind == "euler") {
    require(!nu_given || c.nu == 0, "model.nu", "euler has nu = 0");
    c.nu = 0;
  }
  if (c.model_kind == "navier_stokes" || c.model_kind == "euler" || c.model_kind == "boussinesq_mhd")
    require(c.alpha == 0, "model.alpha", "must be 0 for " + c.model_kind);

  if (auto s = top.sub("ensemble")) {
    s->count("m", c.m);
    s->count("seed", c.seed);
    s->number("dt", c.ensemble_dt);
    s->finish();
  }
  require(c.m >= 1, "ensemble.m", "must be at least 1");
  require(c.ensemble_dt >= 0, "ensemble.dt", "must be nonnegative");

  if (auto s = top.sub("solver")) {
    s->number("tol", c.tol);
    s->count("max_iter", c.max_iter);
    s->number("window_fraction", c.window_fraction);
    s->number("time_constant", c.time_constant);
    s->finish();
  }
  require(c.tol > 0, "solver.tol", "must be positive");
  require(c.max_iter >= 1, "solver.max_iter", "must be at least 1");
  require(c.window_fraction > 0, "solver.window_fraction", "must be positive");
  require(c.time_constant > 0, "solver.time_constant", "must be positive");

  if (auto s = top.sub("initial")) {
    read_preset(*s, c.initial, "preset", true);
    s->text("snapshot", c.snapshot);
    if (auto t = s->sub("theta")) {
      read_preset(*t, c.theta, "preset", false);
      t->finish();
    }
    if (auto b = s->sub("magnetic")) {
      read_preset(*b, c.magnetic, "preset", true);
      b->finish();
    }
    s->finish();
  }

  if (const json* loops = top.find("loops")) {
    require(loops->is_array(), "loops", "expected an array");
    for (std::size_t i = 0; i < loops->size(); ++i) {
      const std::string base = "loops[" + std::to_string(i) + "]";
      Section s((*loops)[i], base);
      LoopSpec l;
      l.name = "loop" + std::to_string(i);
      s.text("kind", l.kind);
      s.text("name", l.name);
      s.count("nodes", l.nodes);
      require(l.kind == "circle" || l.kind == "horizontal", base + ".kind", "must be circle or horizontal");
      require(l.nodes >= MaterialLoop::kMinNodes && l.nodes % 2 == 0, base + ".nodes", "must be even and at least 64");
      require(!l.name.empty() && l.name.find(',') == std::string::npos, base + ".name", "must be nonempty, no commas");
      if (l.kind == "circle") {
        if (const json* c0 = s.find("center")) {
          require(c0->is_array() && c0->size() == 2 && (*c0)[0].is_number() && (*c0)[1].is_number(), base + ".center",
                  "expected [x, y]");
          l.center = {(*c0)[0].get<double>(), (*c0)[1].get<double>()};
        }
        s.number("radius", l.radius);
        require(l.radius > 0, base + ".radius", "must be positive");
      } else {
        s.number("y0", l.y0);
      }
      s.finish();
      for (const auto& o : c.loops) require(o.name != l.name, base + ".name", "duplicate loop name");
      c.loops.push_back(l);
    }
  }

  if (auto s = top.sub("output")) {
    s->text("directory", c.directory);
    s->count("snapshot_stride", c.snapshot_stride);
    s->count("tracked_paths", c.tracked_paths);
    if (const json* f = s->find("formats")) {
      require(f->is_array(), "output.formats", "expected an array");
      c.formats.clear();
      for (const auto& x : *f) {
        require(x.is_string() && (x == "csv" || x == "snapshot"), "output.formats", "entries are csv or snapshot");
        c.formats.push_back(x.get<std::string>());
      }
    }
    s->finish();
  }
  require(!c.directory.empty(), "output.directory", "must be nonempty");

  if (auto s = top.sub("study")) {
    s->text("parameter", c.study_parameter);
    s->count("seeds", c.study_seeds);
    if (const json* v = s->find("values")) {
      require(v->is_array() && !v->empty(), "study.values", "expected a nonempty array");
      c.study_values.clear();
      for (const auto& x : *v) {
        require(x.is_number() && x.get<double>() > 0, "study.values", "entries must be positive numbers");
        c.study_values.push_back(x.get<double>());
      }
    }
    s->finish();
  }
  require(c.study_parameter == "m" || c.study_parameter == "dt", "study.parameter", "must be m or dt");
  require(c.study_seeds >= 1, "study.seeds", "must be at least 1");
  if (c.study_parameter == "m")
    for (double v : c.study_values) require(v == std::floor(v), "study.values", "ensemble sizes must be integers");

  top.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["grid"] = {{"n", c.grid_n}};
  j["time"] = {{"T", c.T}, {"dt", c.dt}, {"window", c.window}, {"reference_dt", c.reference_dt}, {"output_dt", c.output_dt}};
  j["model"] = {{"kind", c.model_kind}, {"alpha", c.alpha}, {"nu", c.nu}};
  j["ensemble"] = {{"m", c.m}, {"seed", c.seed}, {"dt", c.ensemble_dt}};
  j["solver"] = {{"tol", c.tol},
                 {"max_iter", c.max_iter},
                 {"window_fraction", c.window_fraction},
                 {"time_constant", c.time_constant}};
  json init = preset_json(c.initial);
  init["snapshot"] = c.snapshot;
  init["theta"] = preset_json(c.theta);
  init["magnetic"] = preset_json(c.magnetic);
  j["initial"] = init;
  j["loops"] = json::array();
  for (const auto& l : c.loops) {
    json lj = {{"kind", l.kind}, {"name", l.name}, {"nodes", l.nodes}};
    if (l.kind == "circle") {
      lj["center"] = {l.center.x, l.center.y};
      lj["radius"] = l.radius;
    } else {
      lj["y0"] = l.y0;
    }
    j["loops"].push_back(lj);
  }
  j["output"] = {{"directory", c.directory},
                 {"snapshot_stride", c.snapshot_stride},
                 {"formats", c.formats},
                 {"tracked_paths", c.tracked_paths}};
  j["study"] = {{"parameter", c.study_parameter}, {"values", c.study_values}, {"seeds", c.study_seeds}};
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& c) {
  // where the outputs land does not change them
  RunConfig k = c;
  k.directory = RunConfig{}.directory;
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : serialize_config(k)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace stochflow
