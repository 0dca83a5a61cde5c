#include "oseen_ale/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "oseen_ale/assembly.hpp"
#include "oseen_ale/errors.hpp"

namespace oseen_ale {

GronwallEnvelope gronwall_envelope(double dt, const std::vector<double>& gammas,
                                   const std::vector<double>& bs, const std::vector<double>& cs,
                                   double f) {
  GronwallEnvelope out;
  const std::size_t n = gammas.size();
  if (cs.size() != n || (!bs.empty() && bs.size() != n)) {
    throw InvalidArgument("gronwall sequences must have equal length");
  }
  auto negative = [](double v) { return !(v >= 0.0); };
  if (!(dt >= 0.0) || negative(f) || std::any_of(gammas.begin(), gammas.end(), negative) ||
      std::any_of(bs.begin(), bs.end(), negative) || std::any_of(cs.begin(), cs.end(), negative)) {
    out.valid = false;
  }
  double exponent = 0.0;
  double csum = 0.0;
  out.bound.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = dt * gammas[i];
    if (!(x < 1.0)) {
      out.valid = false;
      exponent = std::numeric_limits<double>::infinity();
    } else {
      exponent += dt * gammas[i] / (1.0 - x);
    }
    csum += cs[i];
    out.bound.push_back(std::exp(exponent) * (dt * csum + f));
  }
  return out;
}

bool gronwall_hypothesis_holds(double dt, const std::vector<double>& a, const std::vector<double>& bs,
                               const std::vector<double>& gammas, const std::vector<double>& cs,
                               double f, double tol) {
  double bsum = 0.0;
  double gsum = 0.0;
  double csum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    bsum += bs[i];
    gsum += gammas[i] * a[i];
    csum += cs[i];
    const double lhs = a[i] + dt * bsum;
    const double rhs = dt * gsum + dt * csum + f;
    if (lhs > rhs + tol * std::max(1.0, std::abs(rhs))) return false;
  }
  return true;
}

EnergyLedger build_ledger(const Trajectory& traj) {
  EnergyLedger ledger;
  ledger.variant = traj.config.variant;
  ledger.dt = traj.config.dt;
  LedgerRow acc;
  for (const TimeStepReport& s : traj.steps) {
    LedgerRow r;
    r.step = s.step;
    r.time = s.time;
    r.kinetic = s.kinetic;
    r.viscous = s.viscous;
    r.fine = s.fine;
    r.load = s.load;
    if (s.step > 0) {
      acc.cum_viscous += s.viscous;
      acc.cum_fine += s.fine;
      acc.cum_load += s.load;
      acc.cum_load_norm += std::sqrt(s.load);
    }
    r.cum_viscous = acc.cum_viscous;
    r.cum_fine = acc.cum_fine;
    r.cum_load = acc.cum_load;
    r.cum_load_norm = acc.cum_load_norm;
    ledger.rows.push_back(r);
  }
  return ledger;
}

bool certificate_holds(double lhs, double rhs) {
  return rhs - lhs >= -1e-10 * std::max(1.0, rhs);
}

namespace {

// Keeps the step whose slack, relative to max(1, rhs), is smallest.
void consider(StabilityCertificate& cert, int step, double lhs, double rhs, bool& first) {
  const double rel = (rhs - lhs) / std::max(1.0, rhs);
  const double best = (cert.rhs - cert.lhs) / std::max(1.0, cert.rhs);
  if (first || rel < best) {
    cert.lhs = lhs;
    cert.rhs = rhs;
    cert.slack = rhs - lhs;
    cert.worst_step = step;
    first = false;
  }
}

}  // namespace

StabilityCertificate certify_gcl_stability(const Trajectory& traj, double mu, double mu_T,
                                           double c_omega) {
  if (traj.config.variant != SchemeVariant::GclMidpoint) {
    throw WrongVariant("the GCL estimate needs a GclMidpoint trajectory");
  }
  const EnergyLedger ledger = build_ledger(traj);
  const double dt = ledger.dt;
  const double u0 = ledger.rows.front().kinetic;
  StabilityCertificate cert;
  cert.estimate = "gcl";
  cert.constant = c_omega;
  bool first = true;
  for (std::size_t n = 1; n < ledger.rows.size(); ++n) {
    const LedgerRow& r = ledger.rows[n];
    const double lhs = r.kinetic + dt * (3.0 * mu * r.cum_viscous + mu_T * r.cum_fine);
    const double rhs = u0 + dt * (1.0 + c_omega) / mu * r.cum_load;
    consider(cert, r.step, lhs, rhs, first);
  }
  if (first) consider(cert, 0, u0, u0, first);
  cert.holds = certificate_holds(cert.lhs, cert.rhs);
  return cert;
}

namespace {

struct NogclTerms {
  double lhs;
  double base;
};

std::vector<NogclTerms> nogcl_terms(const Trajectory& traj, double mu, double mu_T) {
  const EnergyLedger ledger = build_ledger(traj);
  const double dt = ledger.dt;
  const double u0 = ledger.rows.front().kinetic;
  std::vector<NogclTerms> out;
  for (std::size_t n = 1; n < ledger.rows.size(); ++n) {
    const LedgerRow& r = ledger.rows[n];
    out.push_back({r.kinetic + 2.0 * mu * dt * r.cum_viscous + mu_T * dt * r.cum_fine,
                   u0 + r.cum_load_norm});
  }
  return out;
}

}  // namespace

double nogcl_ratio(const Trajectory& traj, double mu, double mu_T) {
  double ratio = 0.0;
  for (const auto& t : nogcl_terms(traj, mu, mu_T)) {
    if (t.base > 0.0) {
      ratio = std::max(ratio, t.lhs / t.base);
    } else if (t.lhs > 0.0) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return ratio;
}

DtCondition dt_admissible(const MappingNorms& norms, double dt, double c) {
  DtCondition d;
  d.norms = norms;
  d.constant = c;
  d.lhs = c * dt * dt * norms.sup_grad_w_hat * norms.sup_grad_map * norms.sup_div_w -
          0.5 * dt * norms.sup_div_ustar;
  d.admissible = d.lhs <= d.bound;
  return d;
}

DtCondition dt_admissible(const DiscreteAleMap& map, const AnalyticField& ustar, double c) {
  DtCondition worst;
  for (int n = 0; n < map.grid().num_steps; ++n) {
    DtCondition d = dt_admissible(mapping_norms(map, ustar, n), map.grid().dt, c);
    d.interval = n;
    if (n == 0 || d.lhs > worst.lhs) worst = d;
  }
  return worst;
}

StabilityCertificate certify_nogcl_stability(const Trajectory& traj, double mu, double mu_T,
                                             double c_prime, double c_jacobian) {
  if (traj.config.variant != SchemeVariant::Endpoint) {
    throw WrongVariant("the estimate without GCL needs an Endpoint trajectory");
  }
  const DtCondition cond = dt_admissible(*traj.map, traj.ustar, c_jacobian);
  if (!cond.admissible) {
    throw ConditionViolated("time-step condition fails on interval " + std::to_string(cond.interval) +
                            " (lhs=" + std::to_string(cond.lhs) + ")");
  }
  StabilityCertificate cert;
  cert.estimate = "no-gcl";
  cert.constant = c_prime;
  bool first = true;
  int step = 1;
  for (const auto& t : nogcl_terms(traj, mu, mu_T)) consider(cert, step++, t.lhs, c_prime * t.base, first);
  if (first) {
    const double u0 = traj.steps.front().kinetic;
    consider(cert, 0, u0, c_prime * u0, first);
  }
  cert.holds = certificate_holds(cert.lhs, cert.rhs);
  return cert;
}

std::string to_string(ReferenceKind k) { return k == ReferenceKind::Plain ? "plain" : "richardson"; }

ReferenceKind parse_reference_kind(const std::string& name) {
  if (name == "plain") return ReferenceKind::Plain;
  if (name == "richardson") return ReferenceKind::Richardson;
  throw ConfigError("unknown reference kind '" + name + "'");
}

namespace {

int steps_for(double end_time, double start, double dt) {
  const double s = (end_time - start) / dt;
  const int n = static_cast<int>(std::lround(s));
  if (n < 1 || std::abs(s - n) > 1e-9 * std::max(1.0, s)) {
    throw InvalidArgument("end time is not a whole number of steps of dt=" + std::to_string(dt));
  }
  return n;
}

Trajectory run_at(const ConvergenceStudy& study, double dt) {
  SchemeConfig cfg = study.scheme;
  cfg.variant = SchemeVariant::Endpoint;
  cfg.dt = dt;
  cfg.n_steps = steps_for(study.end_time, cfg.start_time, dt);
  return run_simulation(cfg, study.mesh, study.motion, study.problem);
}

}  // namespace

ConvergenceTable temporal_convergence(const ConvergenceStudy& study) {
  const auto& dts = study.dts;
  if (dts.size() < 3) throw InvalidArgument("a convergence study needs at least three dt values");
  for (std::size_t i = 1; i < dts.size(); ++i) {
    if (std::abs(dts[i] - 0.5 * dts[i - 1]) > 1e-12 * dts[i - 1]) {
      throw InvalidArgument("dt values must halve from row to row");
    }
  }
  if (!study.mesh) throw InvalidArgument("convergence study without a mesh");

  const double dt_min = dts.back();
  const Trajectory ref4 = run_at(study, 0.25 * dt_min);
  std::optional<Trajectory> ref8;
  if (study.reference == ReferenceKind::Richardson) ref8 = run_at(study, 0.125 * dt_min);

  auto reference_at = [&](double t) -> Eigen::VectorXd {
    const int i4 = static_cast<int>(std::lround((t - ref4.config.start_time) / ref4.config.dt));
    const Eigen::VectorXd& u4 = ref4.steps[i4].velocity.coefficients;
    if (!ref8) return u4;
    const int i8 = static_cast<int>(std::lround((t - ref8->config.start_time) / ref8->config.dt));
    return 2.0 * ref8->steps[i8].velocity.coefficients - u4;
  };

  ConvergenceTable table;
  table.reference = study.reference;
  table.noise_floor = study.noise_floor;
  for (double dt : dts) {
    const Trajectory run = run_at(study, dt);
    const FunctionSpace& space = *run.spaces.velocity;
    ConvergenceRow row;
    row.dt = dt;
    double h1_sum = 0.0;
    for (std::size_t i = 1; i < run.steps.size(); ++i) {
      const Configuration cfg = run.map->configuration_at_step(static_cast<int>(i));
      const Eigen::VectorXd e = run.steps[i].velocity.coefficients - reference_at(run.steps[i].time);
      h1_sum += e.dot(assemble_diffusion(space, cfg).matrix * e);
      if (i + 1 == run.steps.size()) {
        row.error_l2 = std::sqrt(std::max(0.0, e.dot(assemble_mass(space, cfg).matrix * e)));
      }
    }
    row.error_h1_summed = std::sqrt(std::max(0.0, dt * h1_sum));
    row.below_floor = row.error_l2 < study.noise_floor;
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      if (!row.below_floor && !prev.below_floor) row.rate = std::log2(prev.error_l2 / row.error_l2);
      if (row.error_h1_summed >= study.noise_floor && prev.error_h1_summed >= study.noise_floor) {
        row.rate_h1 = std::log2(prev.error_h1_summed / row.error_h1_summed);
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

double time_moment(int k, double dt) {
  if (k < 0) throw InvalidArgument("time_moment needs k >= 0");
  return std::pow(dt, k + 1) / (k + 1);
}

}  // namespace oseen_ale
