#include "oseen_ale/timestepper.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "oseen_ale/errors.hpp"

namespace oseen_ale {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void append(Triplets& t, const SparseMatrix& m, double scale, int row0, int col0,
            const std::vector<bool>* skip_rows = nullptr) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      if (skip_rows != nullptr && (*skip_rows)[it.row()]) continue;
      t.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()),
                     scale * it.value());
    }
  }
}

std::vector<bool> dirichlet_mask(const FunctionSpace& space) {
  std::vector<bool> mask(space.num_dofs(), false);
  for (int d : space.boundary_dofs()) mask[d] = true;
  return mask;
}

}  // namespace

std::string to_string(SchemeVariant v) {
  return v == SchemeVariant::GclMidpoint ? "gcl-midpoint" : "endpoint";
}

SchemeVariant parse_variant(const std::string& name) {
  if (name == "gcl" || name == "gcl-midpoint" || name == "midpoint") return SchemeVariant::GclMidpoint;
  if (name == "endpoint") return SchemeVariant::Endpoint;
  throw ConfigError("unknown scheme variant '" + name + "'");
}

void SchemeConfig::validate() const {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (!(mu_T >= 0.0)) throw InvalidArgument("mu_T must be nonnegative");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (n_steps < 1) throw InvalidArgument("n_steps must be at least 1");
  if (!(solver_tolerance > 0.0)) throw InvalidArgument("solver_tolerance must be positive");
}

double discrete_dual_norm(const FunctionSpace& space, const Configuration& config,
                          const Eigen::VectorXd& load) {
  if (load.squaredNorm() == 0.0) return 0.0;
  const SparseMatrix h1 = assemble_diffusion(space, config).matrix + assemble_mass(space, config).matrix;
  const auto mask = dirichlet_mask(space);
  std::vector<int> free_index(space.num_dofs(), -1);
  int nfree = 0;
  for (int i = 0; i < space.num_dofs(); ++i) {
    if (!mask[i]) free_index[i] = nfree++;
  }
  if (nfree == 0) return 0.0;
  Triplets t;
  for (int k = 0; k < h1.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h1, k); it; ++it) {
      const int r = free_index[it.row()];
      const int c = free_index[it.col()];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix a(nfree, nfree);
  a.setFromTriplets(t.begin(), t.end());
  Eigen::VectorXd f(nfree);
  for (int i = 0; i < space.num_dofs(); ++i) {
    if (free_index[i] >= 0) f[free_index[i]] = load[i];
  }
  Eigen::SimplicialLDLT<SparseMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw SolverFailure("dual norm factorization failed");
  const Eigen::VectorXd x = solver.solve(f);
  return std::sqrt(std::max(0.0, f.dot(x)));
}

TimeStepper::TimeStepper(SchemeConfig config, std::shared_ptr<const DiscreteAleMap> map,
                         FlowProblem problem)
    : config_(config), map_(std::move(map)), problem_(std::move(problem)),
      spaces_(make_taylor_hood(map_->mesh_ptr())) {
  config_.validate();
}

double TimeStepper::scheme_time(int n) const {
  const TimeGrid& g = map_->grid();
  return config_.variant == SchemeVariant::GclMidpoint ? g.time(n) + 0.5 * g.dt : g.time(n + 1);
}

TimeStepReport TimeStepper::initial_report() const {
  const Configuration c0 = map_->configuration_at_step(0);
  TimeStepReport r;
  r.step = 0;
  r.time = c0.time();
  r.velocity = interpolate(spaces_.velocity, c0, problem_.initial);
  r.pressure = {spaces_.pressure, Eigen::VectorXd::Zero(spaces_.pressure->num_dofs()), c0.time()};
  const SparseMatrix m0 = assemble_mass(*spaces_.velocity, c0).matrix;
  r.kinetic = r.velocity.coefficients.dot(m0 * r.velocity.coefficients);
  return r;
}

TimeStepReport TimeStepper::step(int n, const FeField& un) const {
  const FunctionSpace& vspace = *spaces_.velocity;
  const FunctionSpace& pspace = *spaces_.pressure;
  const TimeGrid& grid = map_->grid();
  const double dt = grid.dt;
  const double t1 = grid.time(n + 1);
  const double tc = scheme_time(n);

  const Configuration cfg0 = map_->configuration_at_step(n);
  const Configuration cfg1 = map_->configuration_at_step(n + 1);
  const Configuration cfgc = map_->configuration(tc);
  cfgc.check_orientation();
  const MeshVelocityField w = map_->mesh_velocity(n);

  const SparseMatrix m0 = assemble_mass(vspace, cfg0, config_.quadrature_order).matrix;
  const SparseMatrix m1 = assemble_mass(vspace, cfg1, config_.quadrature_order).matrix;
  const SparseMatrix a = assemble_diffusion(vspace, cfgc, config_.viscous_form).matrix;
  const CoarseProjector projector(cfgc, config_.coarse_space);
  const SparseMatrix fine_unit = assemble_fine_scale_diffusion(projector, 1.0, vspace).op.matrix;
  const SparseMatrix conv =
      assemble_convection(vspace, cfgc, relative_advector(problem_.ustar, tc, &w, cfgc),
                          ConvectionForm::Conservative, config_.quadrature_order)
          .matrix;
  const SparseMatrix b = assemble_divergence(vspace, pspace, cfg1).matrix;
  const Eigen::VectorXd mean = assemble_pressure_mean(pspace, cfg1);
  const Eigen::VectorXd load = assemble_load(
      vspace, cfgc, [&](const Vec2& x) { return problem_.forcing(tc, x); }, config_.quadrature_order);

  const SparseMatrix k =
      m1 + dt * (2.0 * config_.mu * a + config_.mu_T * fine_unit + conv);
  Eigen::VectorXd rhs_u = m0 * un.coefficients + dt * load;

  const int nu = vspace.num_dofs();
  const int np = pspace.num_dofs();
  const int n_total = nu + np + 1;
  const auto mask = dirichlet_mask(vspace);

  Triplets t;
  t.reserve(k.nonZeros() + 2 * b.nonZeros() + 2 * np + nu);
  append(t, k, 1.0, 0, 0, &mask);
  const SparseMatrix bt = b.transpose();
  append(t, bt, -1.0, 0, nu, &mask);
  append(t, b, 1.0, nu, 0);
  for (int q = 0; q < np; ++q) {
    t.emplace_back(nu + q, nu + np, mean[q]);
    t.emplace_back(nu + np, nu + q, mean[q]);
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_total);
  rhs.head(nu) = rhs_u;
  const auto pos = vspace.scalar_dof_positions(cfg1);
  for (int s = 0; s < vspace.num_scalar_dofs(); ++s) {
    if (!vspace.scalar_on_boundary()[s]) continue;
    const Vec2 g = problem_.boundary(t1, pos[s]);
    for (int c = 0; c < 2; ++c) {
      const int d = vspace.dof(c, s);
      t.emplace_back(d, d, 1.0);
      rhs[d] = g[c];
    }
  }
  SparseMatrix sys(n_total, n_total);
  sys.setFromTriplets(t.begin(), t.end());
  sys.makeCompressed();

  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(sys);
  if (lu.info() != Eigen::Success) {
    throw SolverFailure("saddle-point factorization failed at step " + std::to_string(n + 1) + ": " +
                        lu.lastErrorMessage());
  }
  Eigen::VectorXd x = lu.solve(rhs);
  Eigen::VectorXd res = rhs - sys * x;
  // One pass of iterative refinement.
  x += lu.solve(res);
  res = rhs - sys * x;
  const double rhs_norm = rhs.norm();
  const double rel = rhs_norm > 0.0 ? res.norm() / rhs_norm : res.norm();
  if (!x.allFinite() || rel > config_.solver_tolerance) {
    throw SolverFailure("linear solve residual " + std::to_string(rel) + " exceeds tolerance at step " +
                        std::to_string(n + 1));
  }

  TimeStepReport r;
  r.step = n + 1;
  r.time = t1;
  r.velocity = {spaces_.velocity, x.head(nu), t1};
  r.pressure = {spaces_.pressure, x.segment(nu, np), t1};
  const Eigen::VectorXd& u = r.velocity.coefficients;
  r.kinetic = u.dot(m1 * u);
  r.viscous = u.dot(a * u);
  r.fine = std::max(0.0, u.dot(fine_unit * u));
  const double dual = discrete_dual_norm(vspace, cfgc, load);
  r.load = dual * dual;
  r.solver_residual = rel;
  r.solver_iterations = 2;
  return r;
}

FeField step_gcl(const FeField& un, int n, SchemeConfig config, std::shared_ptr<const DiscreteAleMap> map,
                 const FlowProblem& problem) {
  config.variant = SchemeVariant::GclMidpoint;
  return TimeStepper(config, std::move(map), problem).step(n, un).velocity;
}

FeField step_endpoint(const FeField& un, int n, SchemeConfig config,
                      std::shared_ptr<const DiscreteAleMap> map, const FlowProblem& problem) {
  config.variant = SchemeVariant::Endpoint;
  return TimeStepper(config, std::move(map), problem).step(n, un).velocity;
}

Trajectory run_simulation(const SchemeConfig& config, std::shared_ptr<const ReferenceMesh> mesh,
                          const MotionProgram& motion, const FlowProblem& problem) {
  config.validate();
  auto map = std::make_shared<const DiscreteAleMap>(DiscreteAleMap::build(mesh, motion, config.grid()));
  const TimeStepper stepper(config, map, problem);
  Trajectory traj;
  traj.config = config;
  traj.problem_name = problem.name;
  traj.ustar = problem.ustar;
  traj.map = map;
  traj.spaces = stepper.spaces();
  traj.steps.reserve(config.n_steps + 1);
  traj.steps.push_back(stepper.initial_report());
  for (int n = 0; n < config.n_steps; ++n) {
    traj.steps.push_back(stepper.step(n, traj.steps.back().velocity));
  }
  return traj;
}

}  // namespace oseen_ale
