#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oseen_ale/ale_map.hpp"
#include "oseen_ale/assembly.hpp"
#include "oseen_ale/fe_space.hpp"
#include "oseen_ale/problems.hpp"
#include "oseen_ale/vms.hpp"

namespace oseen_ale {

enum class SchemeVariant {
  /// Diffusion, convection, VMS and load on the midpoint configuration, load at t^{n+1/2}.
  GclMidpoint,
  /// Every dt-scaled term on the end configuration, load at t^{n+1}.
  Endpoint,
};

[[nodiscard]] std::string to_string(SchemeVariant v);
/// Accepts "gcl"/"gcl-midpoint"/"midpoint" and "endpoint". Throws ConfigError.
[[nodiscard]] SchemeVariant parse_variant(const std::string& name);

struct SchemeConfig {
  double mu = 0.01;
  double mu_T = 0.0;
  double dt = 0.05;
  SchemeVariant variant = SchemeVariant::GclMidpoint;
  int n_steps = 20;
  double solver_tolerance = 1e-10;
  double start_time = 0.0;
  int quadrature_order = 4;
  ViscousForm viscous_form = ViscousForm::Gradient;
  CoarseSpace coarse_space = CoarseSpace::CellwiseConstant;

  /// Throws InvalidArgument unless mu > 0, mu_T >= 0, dt > 0, n_steps >= 1.
  void validate() const;
  [[nodiscard]] TimeGrid grid() const { return {start_time, dt, n_steps}; }
};

struct TimeStepReport {
  int step = 0;
  double time = 0.0;
  FeField velocity;
  FeField pressure;
  double kinetic = 0.0;  // ||u^{n+1}||^2 on the end configuration
  double viscous = 0.0;  // ||grad u^{n+1}||^2 on the scheme configuration
  double fine = 0.0;     // ||(I - P) grad u^{n+1}||^2 on the scheme configuration
  double load = 0.0;     // squared discrete dual norm of the load used in the step
  double solver_residual = 0.0;
  int solver_iterations = 0;
};

struct Trajectory {
  SchemeConfig config;
  std::string problem_name;
  AnalyticField ustar;
  std::shared_ptr<const DiscreteAleMap> map;
  TaylorHoodSpaces spaces;
  /// steps[0] is the interpolated initial state; steps[n] holds u^n.
  std::vector<TimeStepReport> steps;
};

/// sqrt(F^T (A + M)^{-1} F) restricted to the dofs off the Dirichlet boundary.
[[nodiscard]] double discrete_dual_norm(const FunctionSpace& space, const Configuration& config,
                                        const Eigen::VectorXd& load);

class TimeStepper {
 public:
  TimeStepper(SchemeConfig config, std::shared_ptr<const DiscreteAleMap> map, FlowProblem problem);

  [[nodiscard]] const SchemeConfig& config() const noexcept { return config_; }
  [[nodiscard]] const TaylorHoodSpaces& spaces() const noexcept { return spaces_; }
  [[nodiscard]] const std::shared_ptr<const DiscreteAleMap>& map() const noexcept { return map_; }
  [[nodiscard]] const FlowProblem& problem() const noexcept { return problem_; }

  /// Time of the configuration carrying the dt-scaled terms of step n -> n+1.
  [[nodiscard]] double scheme_time(int n) const;
  /// Interpolant of the initial velocity on the initial configuration, with its ledger entry.
  [[nodiscard]] TimeStepReport initial_report() const;
  /// Advances u^n on Omega_{t^n} to u^{n+1} on Omega_{t^{n+1}}.
  [[nodiscard]] TimeStepReport step(int n, const FeField& un) const;

 private:
  SchemeConfig config_;
  std::shared_ptr<const DiscreteAleMap> map_;
  FlowProblem problem_;
  TaylorHoodSpaces spaces_;
};

[[nodiscard]] FeField step_gcl(const FeField& un, int n, SchemeConfig config,
                               std::shared_ptr<const DiscreteAleMap> map, const FlowProblem& problem);
[[nodiscard]] FeField step_endpoint(const FeField& un, int n, SchemeConfig config,
                                    std::shared_ptr<const DiscreteAleMap> map,
                                    const FlowProblem& problem);

[[nodiscard]] Trajectory run_simulation(const SchemeConfig& config,
                                        std::shared_ptr<const ReferenceMesh> mesh,
                                        const MotionProgram& motion, const FlowProblem& problem);

}  // namespace oseen_ale
