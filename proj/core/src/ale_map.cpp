#include "oseen_ale/ale_map.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "oseen_ale/errors.hpp"
#include "oseen_ale/fe_space.hpp"

namespace oseen_ale {

Configuration::Configuration(std::shared_ptr<const ReferenceMesh> mesh, std::vector<Vec2> vertices,
                             double time)
    : mesh_(std::move(mesh)), vertices_(std::move(vertices)), time_(time) {
  if (static_cast<int>(vertices_.size()) != mesh_->num_nodes()) {
    throw InvalidArgument("configuration vertex count does not match mesh");
  }
}

CellGeometry Configuration::cell(int c) const {
  const auto& v = mesh_->cells()[c];
  CellGeometry g;
  g.origin = vertices_[v[0]];
  g.jacobian.col(0) = vertices_[v[1]] - vertices_[v[0]];
  g.jacobian.col(1) = vertices_[v[2]] - vertices_[v[0]];
  g.determinant = g.jacobian.determinant();
  g.inverse = g.jacobian.inverse();
  return g;
}

void Configuration::check_orientation() const {
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const double det = cell(c).determinant;
    if (!(det > 0.0)) throw InvertedCell(c, time_, det);
  }
}

double Configuration::area() const {
  double a = 0.0;
  for (int c = 0; c < mesh_->num_cells(); ++c) a += 0.5 * cell(c).determinant;
  return a;
}

Vec2 MeshVelocityField::value(const ReferenceMesh& mesh, int c, const Vec2& xi) const {
  const auto& v = mesh.cells()[c];
  const auto l = reference::p1_values(xi);
  return l[0] * nodal_values[v[0]] + l[1] * nodal_values[v[1]] + l[2] * nodal_values[v[2]];
}

Mat2 MeshVelocityField::gradient(const Configuration& config, int c) const {
  const auto& v = config.mesh().cells()[c];
  Mat2 dw;
  dw.col(0) = nodal_values[v[1]] - nodal_values[v[0]];
  dw.col(1) = nodal_values[v[2]] - nodal_values[v[0]];
  return dw * config.cell(c).inverse;
}

DiscreteAleMap::DiscreteAleMap(std::shared_ptr<const ReferenceMesh> mesh, MotionProgram motion,
                               TimeGrid grid, std::vector<std::vector<Vec2>> positions)
    : mesh_(std::move(mesh)),
      motion_(std::move(motion)),
      grid_(grid),
      positions_(std::move(positions)) {}

DiscreteAleMap DiscreteAleMap::build(std::shared_ptr<const ReferenceMesh> mesh,
                                     const MotionProgram& motion, const TimeGrid& grid) {
  if (!(grid.dt > 0.0) || grid.num_steps < 1) {
    throw InvalidArgument("time grid needs dt > 0 and at least one step");
  }
  std::vector<std::vector<Vec2>> positions(grid.num_steps + 1);
  for (int n = 0; n <= grid.num_steps; ++n) {
    auto& p = positions[n];
    p.reserve(mesh->nodes().size());
    if (n == 0) {
      p = mesh->nodes();
      continue;
    }
    for (const Vec2& y : mesh->nodes()) p.push_back(motion.displacement(grid.time(n), y));
  }
  DiscreteAleMap map(std::move(mesh), motion, grid, std::move(positions));
  for (int n = 0; n <= grid.num_steps; ++n) {
    map.configuration_at_step(n).check_orientation();
    if (n < grid.num_steps) map.configuration(grid.time(n) + 0.5 * grid.dt).check_orientation();
  }
  return map;
}

std::span<const Vec2> DiscreteAleMap::positions(int n) const {
  if (n < 0 || n > grid_.num_steps) throw IndexOutOfRange("time index " + std::to_string(n));
  return positions_[n];
}

int DiscreteAleMap::interval_of(double tau) const {
  const double s = (tau - grid_.start) / grid_.dt;
  const double tol = 1e-12 * std::max(1.0, std::abs(s));
  if (s < -tol || s > grid_.num_steps + tol) {
    throw IndexOutOfRange("time " + std::to_string(tau) + " outside the map's time grid");
  }
  return std::clamp(static_cast<int>(std::floor(s)), 0, grid_.num_steps - 1);
}

std::vector<Vec2> DiscreteAleMap::positions_at(double tau) const {
  const int n = interval_of(tau);
  const double theta = (tau - grid_.time(n)) / grid_.dt;
  const auto& p0 = positions_[n];
  const auto& p1 = positions_[n + 1];
  std::vector<Vec2> out(p0.size());
  for (std::size_t i = 0; i < p0.size(); ++i) out[i] = theta * p1[i] + (1.0 - theta) * p0[i];
  return out;
}

Configuration DiscreteAleMap::configuration(double tau) const {
  return Configuration(mesh_, positions_at(tau), tau);
}

Configuration DiscreteAleMap::configuration_at_step(int n) const {
  const auto p = positions(n);
  return Configuration(mesh_, std::vector<Vec2>(p.begin(), p.end()), grid_.time(n));
}

Mat2 DiscreteAleMap::deformation_gradient(double tau, int c) const {
  const auto x = positions_at(tau);
  const auto& v = mesh_->cells()[c];
  const auto& y = mesh_->nodes();
  Mat2 dx;
  Mat2 dy;
  dx.col(0) = x[v[1]] - x[v[0]];
  dx.col(1) = x[v[2]] - x[v[0]];
  dy.col(0) = y[v[1]] - y[v[0]];
  dy.col(1) = y[v[2]] - y[v[0]];
  return dx * dy.inverse();
}

MeshVelocityField DiscreteAleMap::mesh_velocity(int n) const {
  if (n < 0 || n >= grid_.num_steps) throw IndexOutOfRange("interval " + std::to_string(n));
  MeshVelocityField w;
  w.interval_index = n;
  w.nodal_values.resize(positions_[n].size());
  for (std::size_t i = 0; i < w.nodal_values.size(); ++i) {
    w.nodal_values[i] = (positions_[n + 1][i] - positions_[n][i]) / grid_.dt;
  }
  return w;
}

double GclBalance::relative() const noexcept {
  const double d = std::abs(defect());
  return mass_scale > 0.0 ? d / mass_scale : d;
}

namespace {

Eigen::Matrix<double, 6, 6> reference_p2_mass() {
  const QuadratureRule rule = triangle_rule(4);
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
  for (int q = 0; q < rule.size(); ++q) {
    const auto phi = reference::p2_values(rule.points[q]);
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) m(a, b) += rule.weights[q] * phi[a] * phi[b];
    }
  }
  return m;
}

}  // namespace

GclBalance gcl_balance(const DiscreteAleMap& map, int n, int phi_i, int phi_j,
                       const TimeQuadrature& time_rule) {
  static const Eigen::Matrix<double, 6, 6> mhat = reference_p2_mass();
  const FunctionSpace p2(map.mesh_ptr(), SpaceKind::Velocity);
  if (phi_i < 0 || phi_j < 0 || phi_i >= p2.num_scalar_dofs() || phi_j >= p2.num_scalar_dofs()) {
    throw IndexOutOfRange("basis index outside the P2 space");
  }
  const MeshVelocityField w = map.mesh_velocity(n);
  const double t0 = map.grid().time(n);
  const double t1 = map.grid().time(n + 1);
  const double dt = map.grid().dt;
  const Configuration c0 = map.configuration_at_step(n);
  const Configuration c1 = map.configuration_at_step(n + 1);
  std::vector<Configuration> cq;
  cq.reserve(time_rule.nodes.size());
  for (double s : time_rule.nodes) cq.push_back(map.configuration(t0 + s * (t1 - t0)));

  GclBalance out{0.0, 0.0, 0.0};
  double m0 = 0.0;
  double m1 = 0.0;
  for (int k = 0; k < map.mesh().num_cells(); ++k) {
    const auto dofs = p2.cell_scalar_dofs(k);
    int a = -1;
    int b = -1;
    for (int l = 0; l < 6; ++l) {
      if (dofs[l] == phi_i) a = l;
      if (dofs[l] == phi_j) b = l;
    }
    if (a < 0 || b < 0) continue;
    const double ref = mhat(a, b);
    m0 += ref * c0.cell(k).determinant;
    m1 += ref * c1.cell(k).determinant;
    for (std::size_t q = 0; q < cq.size(); ++q) {
      out.flux_integral +=
          dt * time_rule.weights[q] * ref * cq[q].cell(k).determinant * w.divergence(cq[q], k);
    }
  }
  out.mass_change = m1 - m0;
  out.mass_scale = std::max(std::abs(m0), std::abs(m1));
  return out;
}

double gcl_residual(const DiscreteAleMap& map, int n, int phi_i, int phi_j,
                    const TimeQuadrature& time_rule) {
  return gcl_balance(map, n, phi_i, phi_j, time_rule).relative();
}

std::vector<std::pair<int, int>> sample_basis_pairs(const ReferenceMesh& mesh, int count,
                                                    std::uint64_t seed) {
  const FunctionSpace p2(std::make_shared<const ReferenceMesh>(mesh), SpaceKind::Velocity);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cell(0, mesh.num_cells() - 1);
  std::uniform_int_distribution<int> local(0, 5);
  std::vector<std::pair<int, int>> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const auto dofs = p2.cell_scalar_dofs(cell(rng));
    const int a = local(rng);
    const int b = local(rng);
    out.emplace_back(dofs[a], dofs[b]);
  }
  return out;
}

double max_gcl_residual(const DiscreteAleMap& map, const std::vector<std::pair<int, int>>& pairs,
                        const TimeQuadrature& time_rule) {
  double worst = 0.0;
  for (int n = 0; n < map.grid().num_steps; ++n) {
    for (const auto& [i, j] : pairs) worst = std::max(worst, gcl_residual(map, n, i, j, time_rule));
  }
  return worst;
}

double TransportBalance::relative() const noexcept {
  const double denom = std::max({std::abs(rate), std::abs(flux), scale});
  return denom > 0.0 ? std::abs(rate - flux) / denom : 0.0;
}

TransportBalance transport_balance(const DiscreteAleMap& map,
                                   const std::function<double(const Vec2&)>& phi_ref, int n,
                                   TransportVelocity velocity, const TimeQuadrature& time_rule) {
  const ReferenceMesh& mesh = map.mesh();
  const TimeGrid& grid = map.grid();
  const double t0 = grid.time(n);
  const double t1 = grid.time(n + 1);

  MeshVelocityField w = map.mesh_velocity(n);
  if (velocity == TransportVelocity::EndpointExact) {
    for (int v = 0; v < mesh.num_nodes(); ++v) {
      w.nodal_values[v] = map.motion().displacement_time_derivative(t1, mesh.nodes()[v]);
    }
  }

  // Cellwise integrals of phi and |phi| over the reference cells.
  const QuadratureRule rule = triangle_rule(8);
  const Configuration ref_config(map.mesh_ptr(), mesh.nodes(), 0.0);
  std::vector<double> phi_int(mesh.num_cells(), 0.0);
  std::vector<double> abs_int(mesh.num_cells(), 0.0);
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const CellGeometry g = ref_config.cell(k);
    for (int q = 0; q < rule.size(); ++q) {
      const double v = phi_ref(g.map(rule.points[q]));
      phi_int[k] += rule.weights[q] * g.determinant * v;
      abs_int[k] += rule.weights[q] * g.determinant * std::abs(v);
    }
  }

  TransportBalance out{0.0, 0.0, 0.0};
  const Configuration c0 = map.configuration_at_step(n);
  const Configuration c1 = map.configuration_at_step(n + 1);
  double i0 = 0.0;
  double i1 = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const double dref = ref_config.cell(k).determinant;
    i0 += phi_int[k] * c0.cell(k).determinant / dref;
    i1 += phi_int[k] * c1.cell(k).determinant / dref;
    out.scale += abs_int[k] * c0.cell(k).determinant / dref;
  }
  out.rate = (i1 - i0) / grid.dt;

  for (std::size_t q = 0; q < time_rule.nodes.size(); ++q) {
    const Configuration cq = map.configuration(t0 + time_rule.nodes[q] * (t1 - t0));
    double flux = 0.0;
    for (int k = 0; k < mesh.num_cells(); ++k) {
      const double dref = ref_config.cell(k).determinant;
      flux += phi_int[k] * cq.cell(k).determinant / dref * w.divergence(cq, k);
    }
    out.flux += time_rule.weights[q] * flux;
  }
  return out;
}

double transport_residual(const DiscreteAleMap& map, const std::function<double(const Vec2&)>& phi_ref,
                          int n, TransportVelocity velocity) {
  return transport_balance(map, phi_ref, n, velocity).relative();
}

AnalyticField AnalyticField::zero() {
  return {[](double, const Vec2&) { return Vec2::Zero().eval(); },
          [](double, const Vec2&) { return Mat2::Zero().eval(); }};
}

double max_row_sum(const Mat2& m) {
  return std::max(std::abs(m(0, 0)) + std::abs(m(0, 1)), std::abs(m(1, 0)) + std::abs(m(1, 1)));
}

MappingNorms mapping_norms(const DiscreteAleMap& map, const AnalyticField& ustar, int n,
                           int sample_order) {
  const ReferenceMesh& mesh = map.mesh();
  const MeshVelocityField w = map.mesh_velocity(n);
  const Configuration ref_config(map.mesh_ptr(), mesh.nodes(), 0.0);
  const Configuration c0 = map.configuration_at_step(n);
  const Configuration c1 = map.configuration_at_step(n + 1);
  const double t1 = map.grid().time(n + 1);
  const QuadratureRule rule = triangle_rule(sample_order);

  MappingNorms out;
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const CellGeometry gref = ref_config.cell(k);
    const Mat2 grad_w_hat = w.gradient(ref_config, k);
    out.sup_grad_w_hat = std::max(out.sup_grad_w_hat, max_row_sum(grad_w_hat));
    // The row-sum norm is convex and D_Y A is linear in time on the interval.
    for (const Configuration* c : {&c0, &c1}) {
      const Mat2 f = c->cell(k).jacobian * gref.inverse;
      out.sup_grad_map = std::max(out.sup_grad_map, max_row_sum(f));
    }
    out.sup_div_w = std::max(out.sup_div_w, std::abs(w.divergence(c1, k)));

    const CellGeometry g1 = c1.cell(k);
    auto sample = [&](const Vec2& xi) {
      out.sup_div_ustar = std::max(out.sup_div_ustar, std::abs(ustar.divergence(t1, g1.map(xi))));
    };
    for (const Vec2& xi : {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}) sample(xi);
    for (const Vec2& xi : rule.points) sample(xi);
  }
  return out;
}

}  // namespace oseen_ale
