#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stochflow/config.hpp"
#include "stochflow/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stochflow: stochastic Lagrangian and reference solvers on the periodic square"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  for (const auto& name : stochflow::run_commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "ensemble seed (overrides ensemble.seed)");
    sub->add_flag("--quiet", quiet, "no progress output");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? stochflow::kExitOk : stochflow::kExitUsage;
  }

  stochflow::RunConfig cfg;
  try {
    cfg = stochflow::load_config(config_path);
  } catch (const stochflow::Error& e) {
    std::cerr << "config: " << e.what() << "\n";
    return stochflow::kExitUsage;
  }
  if (!out_dir.empty()) cfg.directory = out_dir;
  if (seed) cfg.seed = *seed;

  stochflow::RunOptions opts;
  opts.quiet = quiet;
  opts.log = &std::cerr;
  return stochflow::run_experiment(cfg, app.get_subcommands().front()->get_name(), opts);
}
