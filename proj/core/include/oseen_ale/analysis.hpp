#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "oseen_ale/ale_map.hpp"
#include "oseen_ale/problems.hpp"
#include "oseen_ale/timestepper.hpp"

namespace oseen_ale {

// Discrete Gronwall lemma: if A_n + dt sum_{i<=n} B_i <= dt sum_{i<=n} gamma_i A_i
// + dt sum_{i<=n} C_i + f and dt gamma_i < 1, then
// A_n + dt sum B_i <= exp(dt sum sigma_i gamma_i) [dt sum C_i + f], sigma_i = 1/(1 - dt gamma_i).
struct GronwallEnvelope {
  std::vector<double> bound;  // one entry per n
  bool valid = true;          // false if some dt gamma_i >= 1 or an input is negative
};

[[nodiscard]] GronwallEnvelope gronwall_envelope(double dt, const std::vector<double>& gammas,
                                                 const std::vector<double>& bs,
                                                 const std::vector<double>& cs, double f);

/// True when the lemma's hypothesis holds for every n (with relative slack `tol`).
[[nodiscard]] bool gronwall_hypothesis_holds(double dt, const std::vector<double>& a,
                                             const std::vector<double>& bs,
                                             const std::vector<double>& gammas,
                                             const std::vector<double>& cs, double f,
                                             double tol = 0.0);

struct LedgerRow {
  int step = 0;
  double time = 0.0;
  double kinetic = 0.0;
  double viscous = 0.0;
  double fine = 0.0;
  double load = 0.0;  // squared dual norm
  double cum_viscous = 0.0;
  double cum_fine = 0.0;
  double cum_load = 0.0;       // sum of squared dual norms
  double cum_load_norm = 0.0;  // sum of dual norms
};

struct EnergyLedger {
  SchemeVariant variant = SchemeVariant::GclMidpoint;
  double dt = 0.0;
  std::vector<LedgerRow> rows;  // rows[0] is the initial state
};

[[nodiscard]] EnergyLedger build_ledger(const Trajectory& traj);

struct StabilityCertificate {
  std::string estimate;  // "gcl" or "no-gcl"
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double constant = 0.0;  // C_Omega or C'
  bool holds = false;
  int worst_step = 0;     // step with the smallest relative slack
};

/// Tolerance of the holds flag: slack >= -1e-10 max(1, rhs).
[[nodiscard]] bool certificate_holds(double lhs, double rhs);

/// Checks the estimate at every step n >= 1 and reports the tightest one.
/// Throws WrongVariant unless the trajectory used GclMidpoint.
[[nodiscard]] StabilityCertificate certify_gcl_stability(const Trajectory& traj, double mu,
                                                         double mu_T, double c_omega);

/// Largest lhs / (||u0||^2 + sum ||f(t^i)||_{-1}) over the steps of an endpoint run.
/// Returns 0 when both vanish.
[[nodiscard]] double nogcl_ratio(const Trajectory& traj, double mu, double mu_T);

struct DtCondition {
  double lhs = 0.0;
  double bound = 0.5;
  bool admissible = true;
  MappingNorms norms;
  double constant = 1.0;
  int interval = 0;  // interval attaining the largest lhs
};

/// lhs = C dt^2 |D w_hat| |D A| |div w| - (dt/2) |div u*|; admissible iff lhs <= 1/2.
[[nodiscard]] DtCondition dt_admissible(const MappingNorms& norms, double dt, double c);
/// Worst interval of a discrete map.
[[nodiscard]] DtCondition dt_admissible(const DiscreteAleMap& map, const AnalyticField& ustar, double c);

/// Throws WrongVariant unless Endpoint, ConditionViolated if dt_admissible fails on any
/// interval with the Jacobian constant `c_jacobian`.
[[nodiscard]] StabilityCertificate certify_nogcl_stability(const Trajectory& traj, double mu,
                                                           double mu_T, double c_prime,
                                                           double c_jacobian = 1.0);

enum class ReferenceKind {
  Plain,       // run at dt_min / 4
  Richardson,  // 2 u(dt_min / 8) - u(dt_min / 4)
};

[[nodiscard]] std::string to_string(ReferenceKind k);
[[nodiscard]] ReferenceKind parse_reference_kind(const std::string& name);

struct ConvergenceRow {
  double dt = 0.0;
  double error_l2 = 0.0;
  double error_h1_summed = 0.0;
  /// log2(e(2 dt) / e(dt)); NaN on the first row or when either error is below the floor.
  double rate = std::numeric_limits<double>::quiet_NaN();
  double rate_h1 = std::numeric_limits<double>::quiet_NaN();
  bool below_floor = false;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  ReferenceKind reference = ReferenceKind::Richardson;
  double noise_floor = 1e-10;
};

struct ConvergenceStudy {
  SchemeConfig scheme;  // dt and n_steps are overridden; the variant is forced to Endpoint
  std::shared_ptr<const ReferenceMesh> mesh;
  MotionProgram motion;
  FlowProblem problem;
  double end_time = 1.0;
  std::vector<double> dts;  // each half the previous, at least three
  ReferenceKind reference = ReferenceKind::Richardson;
  double noise_floor = 1e-10;
};

/// Throws InvalidArgument for fewer than three dts, a non-halving sequence, or an end time
/// that is not a multiple of every dt.
[[nodiscard]] ConvergenceTable temporal_convergence(const ConvergenceStudy& study);

/// int_{t^n}^{t^n + dt} (s - t^n)^k ds = dt^(k+1) / (k+1).
[[nodiscard]] double time_moment(int k, double dt);

}  // namespace oseen_ale
