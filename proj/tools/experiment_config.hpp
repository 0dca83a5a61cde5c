#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "oseen_ale/analysis.hpp"
#include "oseen_ale/timestepper.hpp"

namespace oseen_ale::cli {

/// One experiment as described by an INI file with the sections
/// [mesh] [motion] [scheme] [problem] [analysis] [output] and optionally [sweep].
struct ExperimentConfig {
  int nx = 8;
  int ny = 8;

  std::string motion = "stationary";
  std::vector<double> motion_params;

  SchemeConfig scheme;
  std::string problem = "decay";

  double c_omega = 1.0;
  std::optional<double> c_prime;
  double c_jacobian = 1.0;
  std::string gcl_time_rule = "midpoint";
  int gcl_samples = 50;
  double gcl_tolerance = 1e-12;
  std::vector<double> dts;
  double end_time = 1.0;
  ReferenceKind reference = ReferenceKind::Richardson;
  double noise_floor = 1e-10;
  double min_rate = 0.85;

  std::string output_dir = "out";
  std::string prefix = "run";

  // Cartesian product of the listed values; empty lists keep the single value above.
  std::vector<std::string> sweep_motions;
  std::vector<std::string> sweep_problems;
  std::vector<double> sweep_mu;
  std::vector<double> sweep_mu_T;

  [[nodiscard]] bool has_sweep() const {
    return !sweep_motions.empty() || !sweep_problems.empty() || !sweep_mu.empty() || !sweep_mu_T.empty();
  }
  /// Throws ConfigError on unknown registry names or out-of-range numbers.
  void validate() const;
  /// One config per sweep point (just *this without a sweep), with sweep fields cleared.
  [[nodiscard]] std::vector<ExperimentConfig> expand() const;
};

/// Throws ConfigError on syntax errors, unknown sections/keys, or invalid values.
[[nodiscard]] ExperimentConfig parse_config(std::istream& is);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

}  // namespace oseen_ale::cli
