#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "stochflow/config.hpp"

namespace stochflow {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,         // bad config or command line
  kExitNotConverged = 2,  // outputs and report still written
  kExitNumerical = 3,     // structural or numerical failure inside a solver
  kExitIo = 4,
};

struct RunOptions {
  bool quiet = false;
  std::ostream* log = nullptr;  // progress and wall time; nothing numeric goes here that is not also on disk
};

// reference, lagrangian, picard-boussinesq, shifted-euler, verify-kelvin, convergence-study
const std::vector<std::string>& run_commands();

// Writes into config.directory: config.json (resolved), report.json, diagnostics.csv, snapshots/.
// convergence-study writes study.csv and summary.json instead of diagnostics.csv.
int run_experiment(const RunConfig& config, const std::string& command, const RunOptions& opts = {});

}  // namespace stochflow
