#include "experiment_config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "oseen_ale/errors.hpp"
#include "oseen_ale/io.hpp"
#include "oseen_ale/motion.hpp"
#include "oseen_ale/problems.hpp"
#include "oseen_ale/quadrature.hpp"

namespace oseen_ale::cli {

namespace {

using Values = std::vector<std::string>;

double to_number(const std::string& key, const std::string& s) {
  try {
    return parse_double(s);
  } catch (const Error&) {
    throw ConfigError(key + ": '" + s + "' is not a number");
  }
}

int to_int(const std::string& key, const std::string& s) {
  const double v = to_number(key, s);
  if (v != static_cast<double>(static_cast<int>(v))) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(v);
}

const std::string& single(const std::string& key, const Values& v) {
  if (v.size() != 1) throw ConfigError(key + ": expected exactly one value");
  return v.front();
}

std::vector<double> numbers(const std::string& key, const Values& v) {
  std::vector<double> out;
  for (const auto& s : v) out.push_back(to_number(key, s));
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(is);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  ExperimentConfig c;
  using Setter = std::function<void(const std::string&, const Values&)>;
  auto num = [](double& field) {
    return Setter([&field](const std::string& k, const Values& v) { field = to_number(k, single(k, v)); });
  };
  auto integer = [](int& field) {
    return Setter([&field](const std::string& k, const Values& v) { field = to_int(k, single(k, v)); });
  };
  auto text = [](std::string& field) {
    return Setter([&field](const std::string& k, const Values& v) { field = single(k, v); });
  };
  auto texts = [](std::vector<std::string>& field) {
    return Setter([&field](const std::string&, const Values& v) { field = v; });
  };
  auto nums = [](std::vector<double>& field) {
    return Setter([&field](const std::string& k, const Values& v) { field = numbers(k, v); });
  };

  const std::map<std::string, Setter> setters = {
      {"mesh.nx", integer(c.nx)},
      {"mesh.ny", integer(c.ny)},
      {"motion.name", text(c.motion)},
      {"motion.params", nums(c.motion_params)},
      {"scheme.mu", num(c.scheme.mu)},
      {"scheme.mu_T", num(c.scheme.mu_T)},
      {"scheme.dt", num(c.scheme.dt)},
      {"scheme.n_steps", integer(c.scheme.n_steps)},
      {"scheme.start_time", num(c.scheme.start_time)},
      {"scheme.solver_tolerance", num(c.scheme.solver_tolerance)},
      {"scheme.quadrature_order", integer(c.scheme.quadrature_order)},
      {"scheme.variant",
       [&c](const std::string& k, const Values& v) { c.scheme.variant = parse_variant(single(k, v)); }},
      {"scheme.viscous_form",
       [&c](const std::string& k, const Values& v) {
         const std::string& s = single(k, v);
         if (s == "gradient") {
           c.scheme.viscous_form = ViscousForm::Gradient;
         } else if (s == "symmetric") {
           c.scheme.viscous_form = ViscousForm::SymmetricGradient;
         } else {
           throw ConfigError(k + ": expected gradient or symmetric");
         }
       }},
      {"scheme.coarse_space",
       [&c](const std::string& k, const Values& v) {
         const std::string& s = single(k, v);
         if (s == "constant") {
           c.scheme.coarse_space = CoarseSpace::CellwiseConstant;
         } else if (s == "linear") {
           c.scheme.coarse_space = CoarseSpace::CellwiseLinear;
         } else {
           throw ConfigError(k + ": expected constant or linear");
         }
       }},
      {"problem.name", text(c.problem)},
      {"analysis.c_omega", num(c.c_omega)},
      {"analysis.c_prime",
       [&c](const std::string& k, const Values& v) { c.c_prime = to_number(k, single(k, v)); }},
      {"analysis.c_jacobian", num(c.c_jacobian)},
      {"analysis.gcl_time_rule", text(c.gcl_time_rule)},
      {"analysis.gcl_samples", integer(c.gcl_samples)},
      {"analysis.gcl_tolerance", num(c.gcl_tolerance)},
      {"analysis.dts", nums(c.dts)},
      {"analysis.end_time", num(c.end_time)},
      {"analysis.reference",
       [&c](const std::string& k, const Values& v) {
         try {
           c.reference = parse_reference_kind(single(k, v));
         } catch (const ConfigError& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"analysis.noise_floor", num(c.noise_floor)},
      {"analysis.min_rate", num(c.min_rate)},
      {"output.dir", text(c.output_dir)},
      {"output.prefix", text(c.prefix)},
      {"sweep.motions", texts(c.sweep_motions)},
      {"sweep.problems", texts(c.sweep_problems)},
      {"sweep.mu", nums(c.sweep_mu)},
      {"sweep.mu_T", nums(c.sweep_mu_T)},
  };

  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    const std::string key = item.fullname();
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(key, item.inputs);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void ExperimentConfig::validate() const {
  if (nx < 2 || ny < 2) throw ConfigError("mesh: nx and ny must be at least 2");
  try {
    scheme.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("scheme: ") + e.what());
  }
  auto check_motion = [this](const std::string& name) { (void)make_motion(name, motion_params); };
  auto check_problem = [](const std::string& name) { (void)make_problem(name, 1.0); };
  check_motion(motion);
  check_problem(problem);
  for (const auto& m : sweep_motions) check_motion(m);
  for (const auto& p : sweep_problems) check_problem(p);
  for (double mu : sweep_mu) {
    if (!(mu > 0.0)) throw ConfigError("sweep: mu values must be positive");
  }
  for (double mt : sweep_mu_T) {
    if (!(mt >= 0.0)) throw ConfigError("sweep: mu_T values must be nonnegative");
  }
  (void)TimeQuadrature::from_name(gcl_time_rule);
  if (gcl_samples < 1) throw ConfigError("analysis: gcl_samples must be positive");
  if (!(c_omega >= 0.0)) throw ConfigError("analysis: c_omega must be nonnegative");
  if (!(c_jacobian > 0.0)) throw ConfigError("analysis: c_jacobian must be positive");
  if (c_prime && !(*c_prime > 0.0)) throw ConfigError("analysis: c_prime must be positive");
  for (double dt : dts) {
    if (!(dt > 0.0)) throw ConfigError("analysis: dts must be positive");
  }
  if (!(end_time > scheme.start_time)) throw ConfigError("analysis: end_time must follow start_time");
}

std::vector<ExperimentConfig> ExperimentConfig::expand() const {
  ExperimentConfig base = *this;
  base.sweep_motions.clear();
  base.sweep_problems.clear();
  base.sweep_mu.clear();
  base.sweep_mu_T.clear();
  const std::vector<std::string> motions = sweep_motions.empty() ? std::vector{motion} : sweep_motions;
  const std::vector<std::string> problems = sweep_problems.empty() ? std::vector{problem} : sweep_problems;
  const std::vector<double> mus = sweep_mu.empty() ? std::vector{scheme.mu} : sweep_mu;
  const std::vector<double> mu_ts = sweep_mu_T.empty() ? std::vector{scheme.mu_T} : sweep_mu_T;
  std::vector<ExperimentConfig> out;
  for (const auto& m : motions) {
    for (const auto& p : problems) {
      for (double mu : mus) {
        for (double mt : mu_ts) {
          ExperimentConfig c = base;
          c.motion = m;
          if (m != motion) c.motion_params.clear();
          c.problem = p;
          c.scheme.mu = mu;
          c.scheme.mu_T = mt;
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

}  // namespace oseen_ale::cli
