#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "oseen_ale/analysis.hpp"

namespace oseen_ale {

/// Shortest round-tripping text for a double: 17 significant digits, "nan"/"inf" spelled out.
[[nodiscard]] std::string format_double(double v);
/// Inverse of format_double. Throws InvalidArgument.
[[nodiscard]] double parse_double(const std::string& s);

// Per-step ledger: variant,dt,step,time,kinetic,viscous,fine,load,cum_viscous,cum_fine,cum_load,cum_load_norm
void write_ledger_csv(std::ostream& os, const EnergyLedger& ledger);
[[nodiscard]] EnergyLedger read_ledger_csv(std::istream& is);

// dt,error_l2,error_h1_summed,rate,rate_h1,below_floor
void write_convergence_csv(std::ostream& os, const ConvergenceTable& table);
[[nodiscard]] ConvergenceTable read_convergence_csv(std::istream& is);

/// Machine-readable summary of one run.
struct RunSummary {
  std::string problem;
  std::string motion;
  SchemeVariant variant = SchemeVariant::GclMidpoint;
  double mu = 0.0;
  double mu_T = 0.0;
  double dt = 0.0;
  int n_steps = 0;
  double final_kinetic = 0.0;
  std::optional<StabilityCertificate> certificate;
  std::optional<DtCondition> dt_condition;
};

[[nodiscard]] std::string to_json(const RunSummary& s);
[[nodiscard]] RunSummary run_summary_from_json(const std::string& text);
[[nodiscard]] std::string to_json(const StabilityCertificate& c);
[[nodiscard]] StabilityCertificate certificate_from_json(const std::string& text);
[[nodiscard]] std::string to_json(const DtCondition& d);
[[nodiscard]] DtCondition dt_condition_from_json(const std::string& text);

}  // namespace oseen_ale
