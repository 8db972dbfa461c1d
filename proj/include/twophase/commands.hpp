#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "twophase/config.hpp"

namespace twophase {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  ///< verify found a failing property, or an unexpected error
  kExitConfig = 2,   ///< bad config or rejected perturbation
  kExitNoProfile = 3,
  kExitBlowUp = 4,
};

struct CommandOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 1;
};

/// Each command writes its artifacts under opts.out_dir and a short summary
/// to `log`. They throw on failure; run_command maps exceptions to exit
/// codes.
int cmd_classify(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_stationary(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);

/// Loads the config for `scenario`, applies an optional regime override and
/// dispatches. Error messages go to `err`.
int run_command(Scenario scenario, const std::string& config_path, const std::string& force_regime,
                const CommandOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace twophase
