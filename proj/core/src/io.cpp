#include "oseen_ale/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "oseen_ale/errors.hpp"

namespace oseen_ale {

using json = nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

// Reads data lines after checking the header; strips a trailing '\r'.
std::vector<std::vector<std::string>> read_rows(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw InvalidArgument("unexpected CSV header '" + line + "'");
  const std::size_t ncols = split_csv(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != ncols) throw InvalidArgument("CSV row has the wrong number of fields");
    rows.push_back(std::move(cells));
  }
  return rows;
}

// JSON has no NaN/inf; they are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from(const json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  return j.get<double>();
}

json cert_json(const StabilityCertificate& c) {
  return {{"estimate", c.estimate}, {"lhs", number(c.lhs)},           {"rhs", number(c.rhs)},
          {"slack", number(c.slack)}, {"constant", number(c.constant)}, {"holds", c.holds},
          {"worst_step", c.worst_step}};
}

StabilityCertificate cert_from(const json& j) {
  StabilityCertificate c;
  c.estimate = j.at("estimate").get<std::string>();
  c.lhs = number_from(j.at("lhs"));
  c.rhs = number_from(j.at("rhs"));
  c.slack = number_from(j.at("slack"));
  c.constant = number_from(j.at("constant"));
  c.holds = j.at("holds").get<bool>();
  c.worst_step = j.at("worst_step").get<int>();
  return c;
}

json dt_json(const DtCondition& d) {
  return {{"lhs", number(d.lhs)},
          {"bound", number(d.bound)},
          {"admissible", d.admissible},
          {"constant", number(d.constant)},
          {"interval", d.interval},
          {"norms",
           {{"sup_grad_w_hat", number(d.norms.sup_grad_w_hat)},
            {"sup_grad_map", number(d.norms.sup_grad_map)},
            {"sup_div_w", number(d.norms.sup_div_w)},
            {"sup_div_ustar", number(d.norms.sup_div_ustar)}}}};
}

DtCondition dt_from(const json& j) {
  DtCondition d;
  d.lhs = number_from(j.at("lhs"));
  d.bound = number_from(j.at("bound"));
  d.admissible = j.at("admissible").get<bool>();
  d.constant = number_from(j.at("constant"));
  d.interval = j.at("interval").get<int>();
  const json& n = j.at("norms");
  d.norms.sup_grad_w_hat = number_from(n.at("sup_grad_w_hat"));
  d.norms.sup_grad_map = number_from(n.at("sup_grad_map"));
  d.norms.sup_div_w = number_from(n.at("sup_div_w"));
  d.norms.sup_div_ustar = number_from(n.at("sup_div_ustar"));
  return d;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  return v;
}

namespace {
const char* const kLedgerHeader =
    "variant,dt,step,time,kinetic,viscous,fine,load,cum_viscous,cum_fine,cum_load,cum_load_norm";
const char* const kConvergenceHeader = "dt,error_l2,error_h1_summed,rate,rate_h1,below_floor";
}  // namespace

void write_ledger_csv(std::ostream& os, const EnergyLedger& ledger) {
  os << kLedgerHeader << '\n';
  const std::string variant = to_string(ledger.variant);
  for (const LedgerRow& r : ledger.rows) {
    os << variant << ',' << format_double(ledger.dt) << ',' << r.step << ',' << format_double(r.time)
       << ',' << format_double(r.kinetic) << ',' << format_double(r.viscous) << ','
       << format_double(r.fine) << ',' << format_double(r.load) << ',' << format_double(r.cum_viscous)
       << ',' << format_double(r.cum_fine) << ',' << format_double(r.cum_load) << ','
       << format_double(r.cum_load_norm) << '\n';
  }
}

EnergyLedger read_ledger_csv(std::istream& is) {
  EnergyLedger ledger;
  for (const auto& c : read_rows(is, kLedgerHeader)) {
    ledger.variant = parse_variant(c[0]);
    ledger.dt = parse_double(c[1]);
    LedgerRow r;
    r.step = std::stoi(c[2]);
    r.time = parse_double(c[3]);
    r.kinetic = parse_double(c[4]);
    r.viscous = parse_double(c[5]);
    r.fine = parse_double(c[6]);
    r.load = parse_double(c[7]);
    r.cum_viscous = parse_double(c[8]);
    r.cum_fine = parse_double(c[9]);
    r.cum_load = parse_double(c[10]);
    r.cum_load_norm = parse_double(c[11]);
    ledger.rows.push_back(r);
  }
  return ledger;
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table) {
  os << kConvergenceHeader << '\n';
  for (const ConvergenceRow& r : table.rows) {
    os << format_double(r.dt) << ',' << format_double(r.error_l2) << ','
       << format_double(r.error_h1_summed) << ',' << format_double(r.rate) << ','
       << format_double(r.rate_h1) << ',' << (r.below_floor ? 1 : 0) << '\n';
  }
}

ConvergenceTable read_convergence_csv(std::istream& is) {
  ConvergenceTable table;
  for (const auto& c : read_rows(is, kConvergenceHeader)) {
    ConvergenceRow r;
    r.dt = parse_double(c[0]);
    r.error_l2 = parse_double(c[1]);
    r.error_h1_summed = parse_double(c[2]);
    r.rate = parse_double(c[3]);
    r.rate_h1 = parse_double(c[4]);
    r.below_floor = c[5] == "1";
    table.rows.push_back(r);
  }
  return table;
}

std::string to_json(const StabilityCertificate& c) { return cert_json(c).dump(2); }

StabilityCertificate certificate_from_json(const std::string& text) { return cert_from(parse_json(text)); }

std::string to_json(const DtCondition& d) { return dt_json(d).dump(2); }

DtCondition dt_condition_from_json(const std::string& text) { return dt_from(parse_json(text)); }

std::string to_json(const RunSummary& s) {
  json j = {{"problem", s.problem},
            {"motion", s.motion},
            {"variant", to_string(s.variant)},
            {"mu", number(s.mu)},
            {"mu_T", number(s.mu_T)},
            {"dt", number(s.dt)},
            {"n_steps", s.n_steps},
            {"final_kinetic", number(s.final_kinetic)}};
  j["certificate"] = s.certificate ? cert_json(*s.certificate) : json(nullptr);
  j["dt_condition"] = s.dt_condition ? dt_json(*s.dt_condition) : json(nullptr);
  return j.dump(2);
}

RunSummary run_summary_from_json(const std::string& text) {
  const json j = parse_json(text);
  RunSummary s;
  try {
    s.problem = j.at("problem").get<std::string>();
    s.motion = j.at("motion").get<std::string>();
    s.variant = parse_variant(j.at("variant").get<std::string>());
    s.mu = number_from(j.at("mu"));
    s.mu_T = number_from(j.at("mu_T"));
    s.dt = number_from(j.at("dt"));
    s.n_steps = j.at("n_steps").get<int>();
    s.final_kinetic = number_from(j.at("final_kinetic"));
    if (!j.at("certificate").is_null()) s.certificate = cert_from(j.at("certificate"));
    if (!j.at("dt_condition").is_null()) s.dt_condition = dt_from(j.at("dt_condition"));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("run summary is missing fields: ") + e.what());
  }
  return s;
}

}  // namespace oseen_ale
