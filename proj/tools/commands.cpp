#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "oseen_ale/errors.hpp"
#include "oseen_ale/io.hpp"
#include "oseen_ale/motion.hpp"

namespace oseen_ale::cli {

namespace fs = std::filesystem;

namespace {

std::shared_ptr<const ReferenceMesh> mesh_of(const ExperimentConfig& cfg) {
  return std::make_shared<const ReferenceMesh>(make_unit_square(cfg.nx, cfg.ny));
}

fs::path output_dir(const ExperimentConfig& cfg, const CommandOptions& opt) {
  fs::path dir = opt.out_dir ? *opt.out_dir : cfg.output_dir;
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << content;
}

// Maps library exceptions onto exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

struct CaseResult {
  RunSummary summary;
  std::string ledger_csv;
  std::string failure;
  bool config_failure = false;
};

CaseResult run_case(const ExperimentConfig& cfg) {
  CaseResult r;
  try {
    const MotionProgram motion = make_motion(cfg.motion, cfg.motion_params);
    const FlowProblem problem = make_problem(cfg.problem, cfg.scheme.mu);
    const Trajectory traj = run_simulation(cfg.scheme, mesh_of(cfg), motion, problem);
    RunSummary& s = r.summary;
    s.problem = cfg.problem;
    s.motion = cfg.motion;
    s.variant = cfg.scheme.variant;
    s.mu = cfg.scheme.mu;
    s.mu_T = cfg.scheme.mu_T;
    s.dt = cfg.scheme.dt;
    s.n_steps = cfg.scheme.n_steps;
    s.final_kinetic = traj.steps.back().kinetic;
    if (cfg.scheme.variant == SchemeVariant::GclMidpoint) {
      s.certificate = certify_gcl_stability(traj, cfg.scheme.mu, cfg.scheme.mu_T, cfg.c_omega);
    } else {
      s.dt_condition = dt_admissible(*traj.map, traj.ustar, cfg.c_jacobian);
      if (s.dt_condition->admissible && cfg.c_prime) {
        s.certificate =
            certify_nogcl_stability(traj, cfg.scheme.mu, cfg.scheme.mu_T, *cfg.c_prime, cfg.c_jacobian);
      }
    }
    std::ostringstream csv;
    write_ledger_csv(csv, build_ledger(traj));
    r.ledger_csv = csv.str();
  } catch (const ConfigError& e) {
    r.failure = e.what();
    r.config_failure = true;
  } catch (const Error& e) {
    r.failure = e.what();
  }
  return r;
}

}  // namespace

std::uint64_t seed_from_environment() {
  const char* v = std::getenv("OSEEN_ALE_SEED");
  if (v == nullptr || *v == '\0') return 0;
  try {
    std::size_t pos = 0;
    const unsigned long long s = std::stoull(v, &pos);
    if (pos != std::string(v).size()) throw std::invalid_argument("trailing characters");
    return s;
  } catch (const std::exception&) {
    throw ConfigError(std::string("OSEEN_ALE_SEED is not an unsigned integer: '") + v + "'");
  }
}

int cmd_run(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cases = cfg.expand();
    const fs::path dir = output_dir(cfg, opt);
    std::vector<std::size_t> order(cases.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(opt.seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<CaseResult> results(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k = next++; k < order.size(); k = next++) results[order[k]] = run_case(cases[order[k]]);
    };
    const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(cases.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = kOk;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const CaseResult& r = results[i];
      const std::string stem = cases.size() == 1 ? cfg.prefix : cfg.prefix + "_" + std::to_string(i);
      if (!r.failure.empty()) {
        err << stem << ": " << r.failure << '\n';
        code = std::max<int>(code, r.config_failure ? kConfigError : kSolverFailure);
        continue;
      }
      write_file(dir / (stem + "_ledger.csv"), r.ledger_csv);
      write_file(dir / (stem + "_summary.json"), to_json(r.summary) + "\n");
      const auto& c = cases[i];
      std::string holds = "n/a";
      if (r.summary.certificate) holds = r.summary.certificate->holds ? "true" : "false";
      out << stem << " motion=" << c.motion << " problem=" << c.problem << " variant="
          << to_string(c.scheme.variant) << " mu=" << format_double(c.scheme.mu)
          << " mu_T=" << format_double(c.scheme.mu_T) << " holds=" << holds;
      if (r.summary.dt_condition) {
        out << " dt_admissible=" << (r.summary.dt_condition->admissible ? "true" : "false");
      }
      out << '\n';
      if (r.summary.certificate && !r.summary.certificate->holds) code = std::max<int>(code, kCheckFailed);
    }
    return code;
  });
}

int cmd_gcl_check(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const auto mesh = mesh_of(cfg);
    const auto map = DiscreteAleMap::build(mesh, make_motion(cfg.motion, cfg.motion_params), cfg.scheme.grid());
    const auto pairs = sample_basis_pairs(*mesh, cfg.gcl_samples, opt.seed);
    const TimeQuadrature rule = TimeQuadrature::from_name(cfg.gcl_time_rule);
    const double worst = max_gcl_residual(map, pairs, rule);
    const double tol = opt.tolerance.value_or(cfg.gcl_tolerance);
    out << "motion=" << cfg.motion << " time_rule=" << rule.name << " pairs=" << pairs.size()
        << " intervals=" << map.grid().num_steps << " max_residual=" << format_double(worst)
        << " tolerance=" << format_double(tol) << '\n';
    return worst <= tol ? kOk : kCheckFailed;
  });
}

int cmd_converge(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.dts.size() < 3) throw ConfigError("analysis: dts needs at least three values");
    ConvergenceStudy study;
    study.scheme = cfg.scheme;
    study.mesh = mesh_of(cfg);
    study.motion = make_motion(cfg.motion, cfg.motion_params);
    study.problem = make_problem(cfg.problem, cfg.scheme.mu);
    study.end_time = cfg.end_time;
    study.dts = cfg.dts;
    study.reference = cfg.reference;
    study.noise_floor = cfg.noise_floor;
    ConvergenceTable table;
    try {
      table = temporal_convergence(study);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    std::ostringstream csv;
    write_convergence_csv(csv, table);
    out << csv.str();
    write_file(output_dir(cfg, opt) / (cfg.prefix + "_convergence.csv"), csv.str());
    const double finest = table.rows.back().rate;
    const double min_rate = opt.tolerance.value_or(cfg.min_rate);
    if (std::isnan(finest)) {
      err << "errors below the noise floor " << format_double(cfg.noise_floor) << "; no rate reported\n";
      return kCheckFailed;
    }
    return finest >= min_rate ? kOk : kCheckFailed;
  });
}

int cmd_dt_condition(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& out,
                     std::ostream& err) {
  (void)opt;
  return guarded(err, [&] {
    const auto map =
        DiscreteAleMap::build(mesh_of(cfg), make_motion(cfg.motion, cfg.motion_params), cfg.scheme.grid());
    const FlowProblem problem = make_problem(cfg.problem, cfg.scheme.mu);
    const DtCondition d = dt_admissible(map, problem.ustar, cfg.c_jacobian);
    out << "lhs=" << format_double(d.lhs) << " bound=" << format_double(d.bound)
        << " admissible=" << (d.admissible ? "true" : "false") << " interval=" << d.interval
        << " C=" << format_double(d.constant) << '\n';
    return d.admissible ? kOk : kCheckFailed;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moving-domain Oseen solver and stability checks"};
  app.require_subcommand(1);
  std::string config_path;
  CommandOptions opt;
  std::optional<std::string> out_dir;
  std::optional<double> tolerance;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI experiment description")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
    sub->add_option("--jobs", opt.jobs, "Concurrent runs in a sweep")->check(CLI::PositiveNumber);
    sub->add_option("--tolerance", tolerance, "Pass threshold for the check");
  };
  CLI::App* run = app.add_subcommand("run", "Run a simulation or sweep and certify it");
  CLI::App* gcl = app.add_subcommand("gcl-check", "Maximum GCL residual over sampled basis pairs");
  CLI::App* conv = app.add_subcommand("converge", "Temporal convergence table");
  CLI::App* dtc = app.add_subcommand("dt-condition", "Time-step admissibility of the endpoint scheme");
  for (CLI::App* sub : {run, gcl, conv, dtc}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << '\n';
    return kConfigError;
  }
  opt.out_dir = out_dir;
  opt.tolerance = tolerance;

  ExperimentConfig cfg;
  try {
    opt.seed = seed_from_environment();
    cfg = load_config(config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (run->parsed()) return cmd_run(cfg, opt, out, err);
  if (gcl->parsed()) return cmd_gcl_check(cfg, opt, out, err);
  if (conv->parsed()) return cmd_converge(cfg, opt, out, err);
  return cmd_dt_condition(cfg, opt, out, err);
}

}  // namespace oseen_ale::cli
