#pragma once

#include <iosfwd>
#include <string>

#include "ensflow/config.hpp"

namespace ensflow {

/// Exit-code contract shared by every subcommand: 0 pass, 1 criterion or
/// validation failure, 2 configuration error, 3 backend (oracle) divergence.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitConfig = 2,
  kExitOracleDivergence = 3,
};

struct RunOptions {
  std::string output_dir;        // overrides the config value when nonempty
  bool negative_control = false; // verify: expect the criterion to fail
};

/// Shortest round-trip decimal form of a double (the CSV/JSON number format).
std::string format_double(double v);

int run_validate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
int run_simulate(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
/// which: "4.1" | "4.2" | "5.1" | "rl".
int run_verify(const RunConfig& cfg, const std::string& which, const RunOptions& opts,
               std::ostream& log);

}  // namespace ensflow
