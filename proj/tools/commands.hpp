#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "experiment_config.hpp"

namespace oseen_ale::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kSolverFailure = 3,
};

struct CommandOptions {
  std::optional<std::string> out_dir;  // overrides [output] dir
  int jobs = 1;
  std::optional<double> tolerance;  // overrides the command's default threshold
  std::uint64_t seed = 0;
};

/// Reads OSEEN_ALE_SEED (0 when unset). Throws ConfigError when it does not parse.
[[nodiscard]] std::uint64_t seed_from_environment();

// Each command writes data to `out`, diagnostics to `err`, and returns an exit code.
// Library errors are translated: ConfigError -> 2, any other library error -> 3.
int cmd_run(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_gcl_check(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out,
                  std::ostream& err);
int cmd_converge(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out,
                 std::ostream& err);
int cmd_dt_condition(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out,
                     std::ostream& err);

/// Parses argv (subcommand + flags), loads the config, and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oseen_ale::cli
