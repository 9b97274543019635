#include "stochflow/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "json.hpp"
#include "stochflow/diagnostics.hpp"
#include "stochflow/lagrangian.hpp"
#include "stochflow/picard.hpp"
#include "stochflow/reference.hpp"
#include "stochflow/snapshot.hpp"
#include "stochflow/spectral.hpp"

namespace stochflow {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class NotConverged : public Error {
 public:
  using Error::Error;
};

std::size_t ratio(double a, double b, const std::string& key, const std::string& what) {
  const double r = a / b;
  const long n = std::lround(r);
  if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-9 * std::max(1.0, r)) throw ConfigError(key, what);
  return static_cast<std::size_t>(n);
}

class Run {
 public:
  Run(const RunConfig& c, const RunOptions& o) : c_(c), o_(o), dir_(c.directory), hash_(config_hash(c)) {}

  const RunConfig& cfg() const { return c_; }

  void log(const std::string& s) const {
    if (!o_.quiet && o_.log) *o_.log << s << "\n";
  }

  void prepare() {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
    write_text("config.json", serialize_config(c_));
  }

  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream out(dir_ / name, std::ios::trunc);
    out << text;
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
  }

  FluidState initial() const {
    const Grid g = c_.grid();
    const bool forced = c_.model_kind == "boussinesq_mhd";
    if (!c_.snapshot.empty()) {
      auto load = [&](const std::string& f) {
        FieldSnapshot s = read_snapshot(c_.snapshot + "_" + f);
        if (!(s.field.grid() == g)) throw ConfigError("initial.snapshot", "grid_n differs from grid.n");
        return s;
      };
      auto exists = [&](const std::string& f) { return fs::exists(c_.snapshot + "_" + f + ".json"); };
      FieldSnapshot ux = load("u_x"), uy = load("u_y");
      VectorField u(std::move(ux.field), std::move(uy.field));
      std::optional<ScalarField> th;
      std::optional<VectorField> B;
      if (forced) {
        th = exists("theta") ? load("theta").field : scalar_preset(g, c_.theta);
        B = exists("B_x") ? VectorField(load("B_x").field, load("B_y").field) : velocity_preset(g, c_.magnetic);
      }
      return FluidState::make(0, std::move(u), th, B);
    }
    VectorField u = velocity_preset(g, c_.initial);
    if (!forced) return FluidState::make(0, std::move(u));
    return FluidState::make(0, std::move(u), scalar_preset(g, c_.theta), velocity_preset(g, c_.magnetic));
  }

  void snapshot(const FluidState& s, std::size_t row, bool last) {
    if (!c_.wants("snapshot")) return;
    const bool due = last || (c_.snapshot_stride > 0 && row % c_.snapshot_stride == 0);
    if (!due) return;
    fs::create_directories(dir_ / "snapshots");
    char stem[32];
    std::snprintf(stem, sizeof stem, "snap_%06zu", row);
    const std::string base = (dir_ / "snapshots" / stem).string();
    const std::string model = c_.model().name();
    auto put = [&](const ScalarField& f, const std::string& name) {
      write_snapshot(f, base + "_" + name, {0, name, s.t, model, hash_});
    };
    put(s.u.x, "u_x");
    put(s.u.y, "u_y");
    put(s.omega, "omega");
    if (s.theta) put(*s.theta, "theta");
    if (s.B) {
      put(s.B->x, "B_x");
      put(s.B->y, "B_y");
    }
  }

  void finish_csv(const ConservationLedger& l, const std::string& name = "diagnostics.csv") const {
    if (c_.wants("csv")) write_text(name, l.to_csv());
  }

  void report(const std::string& command, const SolveReport& r, const json& extra = json::object()) const {
    json j = extra;
    j["command"] = command;
    j["converged"] = r.converged;
    j["iterates"] = r.iterates;
    j["window_iterations"] = r.window_iterations;
    json mc = json::object();
    for (const auto& [k, v] : r.mc_stats) mc[k] = v;
    j["mc_stats"] = mc;
    j["config_hash"] = hash_;
    write_text("report.json", j.dump(2) + "\n");
  }

  std::vector<MaterialLoop> loops() const {
    std::vector<MaterialLoop> l;
    for (const auto& s : c_.loops) l.push_back(s.build());
    return l;
  }

  // output every k-th stamp of a trajectory spaced by step
  std::size_t stride(double step, double fallback) const {
    const double out = c_.output_dt > 0 ? c_.output_dt : fallback;
    return ratio(out, step, "time.output_dt", "must be a multiple of the step");
  }

  double ensemble_dt() const { return c_.ensemble_dt > 0 ? c_.ensemble_dt : c_.dt / 2; }

  LagrangianOptions lagrangian_options() const {
    LagrangianOptions o;
    o.window = c_.window;
    o.window_fraction = c_.window_fraction;
    o.tol = c_.tol;
    o.max_iter = c_.max_iter;
    return o;
  }

  LagrangianResult lagrangian(const Ensemble& e, const FluidState& init) const {
    if (c_.window > 0) {
      ratio(c_.T, c_.window, "time.window", "must divide time.T");
      ratio(c_.window, c_.dt, "time.dt", "must divide time.window");
    } else {
      ratio(c_.T, c_.dt, "time.dt", "must divide time.T");
    }
    return lagrangian_window_solve(c_.model(), init, c_.T, c_.dt, e, lagrangian_options());
  }

  Ensemble ensemble(std::size_t m, std::uint64_t seed) const { return sample_paths(m, c_.T, ensemble_dt(), c_.nu, seed); }

 private:
  const RunConfig& c_;
  RunOptions o_;
  fs::path dir_;
  std::string hash_;
};

void ledger_rows(Run& run, const std::vector<FluidState>& traj, std::size_t every, ConservationLedger& ledger) {
  const std::vector<MaterialLoop> loops = run.loops();
  std::size_t row = 0;
  for (std::size_t k = 0; k < traj.size(); k += every, ++row) {
    LedgerInputs in;
    in.loops = loops;
    ledger_update(ledger, run.cfg().model(), traj[k], in);
    run.snapshot(traj[k], row, k + every >= traj.size());
  }
}

void cmd_reference(Run& run) {
  const RunConfig& c = run.cfg();
  const std::size_t every = run.stride(c.reference_dt, c.T / 10);
  ReferenceOptions ro;
  ro.output_dt = c.reference_dt * static_cast<double>(every);
  const auto traj = reference_solve(c.model(), run.initial(), c.T, c.reference_dt, ro);
  ConservationLedger ledger;
  ledger_rows(run, traj, 1, ledger);
  run.finish_csv(ledger);
  SolveReport r;
  r.converged = true;
  run.report("reference", r);
}

void cmd_lagrangian(Run& run) {
  const RunConfig& c = run.cfg();
  const std::size_t every = run.stride(c.dt, c.dt);
  const LagrangianResult res = run.lagrangian(run.ensemble(c.m, c.seed), run.initial());
  ConservationLedger ledger;
  ledger_rows(run, res.trajectory, every, ledger);
  run.finish_csv(ledger);
  run.report("lagrangian", res.report);
  if (!res.report.converged) throw NotConverged("lagrangian: fixed point not reached within max_iter");
}

void cmd_picard(Run& run) {
  const RunConfig& c = run.cfg();
  if (c.model_kind != "boussinesq_mhd") throw ConfigError("model.kind", "picard-boussinesq needs boussinesq_mhd");
  if (c.nu != 0) throw ConfigError("model.nu", "picard-boussinesq is inviscid; set nu = 0");
  const FluidState init = run.initial();
  PicardOptions po;
  po.tol = c.tol;
  po.max_iter = c.max_iter;
  po.time_constant = c.time_constant;
  const PicardResult res = picard_boussinesq(init.u, *init.theta, *init.B, c.T, c.dt, po);
  ConservationLedger ledger;
  ledger_rows(run, res.trajectory, run.stride(c.dt, c.dt), ledger);
  run.finish_csv(ledger);
  run.report("picard-boussinesq", res.report);
  if (!res.report.converged) throw NotConverged("picard-boussinesq: fixed point not reached within max_iter");
}

void cmd_shifted_euler(Run& run) {
  const RunConfig& c = run.cfg();
  if (c.model_kind == "boussinesq_mhd" || c.alpha != 0)
    throw ConfigError("model.kind", "shifted-euler runs the alpha = 0 family");
  const std::size_t every = run.stride(c.dt, c.dt);
  const double out_dt = c.dt * static_cast<double>(every);
  ratio(out_dt, c.reference_dt, "time.reference_dt", "must divide the output spacing");
  ratio(c.T, out_dt, "time.output_dt", "must divide T");
  const FluidState init = run.initial();
  ReferenceOptions ro;
  ro.output_dt = out_dt;
  const auto euler = reference_solve(ModelSpec::euler(), init, c.T, c.reference_dt, ro);

  const std::size_t paths = std::min(c.m, c.tracked_paths);
  const Ensemble e = run.ensemble(paths, c.seed);
  std::vector<std::vector<double>> defects(paths);
  SolveReport all;
  all.converged = true;
  for (std::size_t i = 0; i < paths; ++i) {
    const LagrangianResult r = nonaveraged_shifted_euler(init.u, e.path(i), c.T, c.dt, run.lagrangian_options());
    all.iterates.insert(all.iterates.end(), r.report.iterates.begin(), r.report.iterates.end());
    all.window_iterations.insert(all.window_iterations.end(), r.report.window_iterations.begin(),
                                 r.report.window_iterations.end());
    all.converged = all.converged && r.report.converged;
    for (std::size_t k = 0, row = 0; k < r.trajectory.size(); k += every, ++row) {
      const Point s = e.path(i).shift(r.trajectory[k].t);
      const VectorField exact = shift_field(euler[row].u, Point{-s.x, -s.y});
      const double nrm = l2_norm(exact);
      const double d = l2_norm(r.trajectory[k].u - exact);
      defects[i].push_back(nrm > 0 ? d / nrm : d);
    }
    if (i == 0) {
      std::size_t row = 0;
      for (std::size_t k = 0; k < r.trajectory.size(); k += every, ++row)
        run.snapshot(r.trajectory[k], row, k + every >= r.trajectory.size());
    }
  }
  ConservationLedger out;
  for (std::size_t row = 0; row < euler.size(); ++row) {
    out.begin_row(euler[row].t);
    out.set("euler_energy", energy(ModelSpec::euler(), euler[row].u));
    for (std::size_t i = 0; i < paths; ++i) out.set("shifted_euler_defect_p" + std::to_string(i), defects[i][row]);
  }
  run.finish_csv(out);
  run.report("shifted-euler", all);
  if (!all.converged) throw NotConverged("shifted-euler: fixed point not reached within max_iter");
}

void cmd_verify_kelvin(Run& run) {
  const RunConfig& c = run.cfg();
  if (c.model_kind == "boussinesq_mhd") throw ConfigError("model.kind", "verify-kelvin runs the gsqg family");
  std::vector<MaterialLoop> loops = run.loops();
  if (loops.empty()) loops.push_back(MaterialLoop::circle({kTwoPi / 2, kTwoPi / 2}, 1.0, 256, "default"));
  const std::size_t every = run.stride(c.dt, c.dt);
  const FluidState init = run.initial();
  const Ensemble e = run.ensemble(c.m, c.seed);
  const LagrangianResult res = run.lagrangian(e, init);
  const ModelSpec model = c.model();
  const TimeSampledVelocity history = velocity_history(res.trajectory);
  const VectorField xi0 = momentum(model, init.u);
  const ScalarField q0 = curl2d(xi0);
  const std::size_t tracked = std::min(c.m, c.tracked_paths);

  ConservationLedger ledger;
  std::size_t row = 0;
  for (std::size_t k = 0; k < res.trajectory.size(); k += every, ++row) {
    const FluidState& s = res.trajectory[k];
    const bool last = k + every >= res.trajectory.size();
    ledger_update(ledger, model, s);
    run.snapshot(s, row, last);
    double lo = 1, hi = 1, worst = 0;
    std::vector<FlowMap> backward;
    const std::size_t need = last ? c.m : tracked;
    for (std::size_t i = 0; i < need; ++i) {
      // both flows are the identity at t = 0
      const FlowPair f = k == 0 ? FlowPair{FlowMap::identity(s.u.grid()), FlowMap::identity(s.u.grid())}
                                : stochastic_flow_pair(history, e.path(i), s.t, c.dt);
      if (i < tracked) {
        const auto [a, b] = det_extremes(f.forward);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
        for (const MaterialLoop& l : loops) {
          const double r = pathwise_kelvin_residual(xi0, l, f);
          ledger.set("kelvin_" + l.name() + "_p" + std::to_string(i), r);
          worst = std::max(worst, r);
        }
        ledger.set("pathwise_enstrophy_defect_p" + std::to_string(i), pathwise_enstrophy_defect(q0, f.backward));
      }
      if (last) backward.push_back(f.backward);
    }
    ledger.set("det_min", lo);
    ledger.set("det_max", hi);
    ledger.set("kelvin_max", worst);
    if (last) {
      const VectorField xi = momentum(model, s.u);
      for (const MaterialLoop& l : loops) {
        const StatisticalKelvin st = statistical_kelvin_residual(xi, xi0, l, backward);
        ledger.set("kelvin_stat_" + l.name(), st.residual);
        ledger.set("kelvin_stat_se_" + l.name(), st.standard_error);
      }
    }
  }
  run.finish_csv(ledger);
  run.report("verify-kelvin", res.report);
  if (!res.report.converged) throw NotConverged("verify-kelvin: fixed point not reached within max_iter");
}

double loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void cmd_study(Run& run) {
  const RunConfig& c = run.cfg();
  if (c.model_kind == "boussinesq_mhd") throw ConfigError("model.kind", "convergence-study runs the gsqg family");
  const FluidState init = run.initial();
  const auto ref = reference_solve(c.model(), init, c.T, c.reference_dt);
  const VectorField& uref = ref.back().u;
  std::string csv = "value,seed,error,standard_error,iterations\n";
  std::vector<double> rms;
  char buf[200];
  for (std::size_t vi = 0; vi < c.study_values.size(); ++vi) {
    const double v = c.study_values[vi];
    double sq = 0;
    for (std::size_t s = 0; s < c.study_seeds; ++s) {
      RunConfig cv = c;
      if (c.study_parameter == "m")
        cv.m = static_cast<std::size_t>(v);
      else
        cv.dt = v;
      const Run sub(cv, {true, nullptr});
      // paths are counter-based, so reusing a seed across values would nest the ensembles
      const std::uint64_t seed = c.seed + vi * c.study_seeds + s;
      const LagrangianResult r = sub.lagrangian(sub.ensemble(cv.m, seed), init);
      const double err = l2_norm(r.trajectory.back().u - uref) / l2_norm(uref);
      sq += err * err;
      std::snprintf(buf, sizeof buf, "%.17g,%llu,%.17g,%.17g,%zu\n", v, static_cast<unsigned long long>(seed), err,
                    r.report.mc_stat("u"), r.report.iterates.size());
      csv += buf;
      run.log(std::string("study ") + buf);
    }
    rms.push_back(std::sqrt(sq / static_cast<double>(c.study_seeds)));
  }
  run.write_text("study.csv", csv);
  json j = {{"parameter", c.study_parameter}, {"values", c.study_values}, {"rms_error", rms}};
  j["slope"] = c.study_values.size() >= 2 ? json(loglog_fit(c.study_values, rms)) : json(nullptr);
  j["config_hash"] = config_hash(c);
  run.write_text("summary.json", j.dump(2) + "\n");
}

}  // namespace

const std::vector<std::string>& run_commands() {
  static const std::vector<std::string> c{"reference",     "lagrangian",    "picard-boussinesq",
                                          "shifted-euler", "verify-kelvin", "convergence-study"};
  return c;
}

int run_experiment(const RunConfig& config, const std::string& command, const RunOptions& opts) {
  static const std::map<std::string, std::function<void(Run&)>> table{
      {"reference", cmd_reference},       {"lagrangian", cmd_lagrangian},       {"picard-boussinesq", cmd_picard},
      {"shifted-euler", cmd_shifted_euler}, {"verify-kelvin", cmd_verify_kelvin}, {"convergence-study", cmd_study}};
  Run run(config, opts);
  const auto it = table.find(command);
  if (it == table.end()) {
    if (opts.log) *opts.log << "unknown command '" << command << "'\n";
    return kExitUsage;
  }
  const auto start = std::chrono::steady_clock::now();
  auto fail = [&](const char* kind, const std::exception& e, int code) {
    if (opts.log) *opts.log << command << ": " << kind << ": " << e.what() << "\n";
    return code;
  };
  try {
    run.prepare();
    it->second(run);
  } catch (const NotConverged& e) {
    return fail("not converged", e, kExitNotConverged);
  } catch (const ConfigError& e) {
    return fail("config error", e, kExitUsage);
  } catch (const IoError& e) {
    return fail("i/o error", e, kExitIo);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("i/o error", e, kExitIo);
  } catch (const Error& e) {
    return fail("error", e, kExitNumerical);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s", wall);
  run.log(command + " finished in " + buf);
  return kExitOk;
}

}  // namespace stochflow
