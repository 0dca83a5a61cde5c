#include "oseen_ale/fe_space.hpp"

#include <cmath>
#include <utility>

#include "oseen_ale/errors.hpp"
#include "oseen_ale/quadrature.hpp"

namespace oseen_ale {

namespace reference {

std::array<double, kP1Size> p1_values(const Vec2& xi) {
  return {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
}

std::array<Vec2, kP1Size> p1_gradients() {
  return {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
}

std::array<double, kP2Size> p2_values(const Vec2& xi) {
  const auto l = p1_values(xi);
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

std::array<Vec2, kP2Size> p2_gradients(const Vec2& xi) {
  const auto l = p1_values(xi);
  const auto g = p1_gradients();
  return {(4.0 * l[0] - 1.0) * g[0],
          (4.0 * l[1] - 1.0) * g[1],
          (4.0 * l[2] - 1.0) * g[2],
          4.0 * (l[1] * g[0] + l[0] * g[1]),
          4.0 * (l[2] * g[1] + l[1] * g[2]),
          4.0 * (l[0] * g[2] + l[2] * g[0])};
}

const std::array<Vec2, kP2Size>& p2_nodes() {
  static const std::array<Vec2, kP2Size> nodes = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0),
                                                  Vec2(0.5, 0.0), Vec2(0.5, 0.5), Vec2(0.0, 0.5)};
  return nodes;
}

}  // namespace reference

FunctionSpace::FunctionSpace(std::shared_ptr<const ReferenceMesh> mesh, SpaceKind kind)
    : mesh_(std::move(mesh)), kind_(kind) {
  const int nv = mesh_->num_nodes();
  num_scalar_dofs_ = degree() == 2 ? nv + mesh_->num_edges() : nv;
  on_boundary_.assign(num_scalar_dofs_, false);
  for (int v = 0; v < nv; ++v) on_boundary_[v] = mesh_->is_boundary_node(v);
  if (degree() == 2) {
    const auto& edges = mesh_->edges();
    for (int e = 0; e < mesh_->num_edges(); ++e) on_boundary_[nv + e] = edges[e].num_cells == 1;
  }
}

std::array<int, 6> FunctionSpace::cell_scalar_dofs(int cell) const {
  const auto& c = mesh_->cells()[cell];
  if (degree() == 1) return {c[0], c[1], c[2], -1, -1, -1};
  const auto& e = mesh_->cell_edges(cell);
  const int nv = mesh_->num_nodes();
  return {c[0], c[1], c[2], nv + e[0], nv + e[1], nv + e[2]};
}

std::vector<Vec2> FunctionSpace::scalar_dof_positions(const Configuration& config) const {
  const auto& x = config.vertices();
  std::vector<Vec2> pos(x.begin(), x.end());
  if (degree() == 2) {
    for (const auto& e : mesh_->edges()) pos.push_back(0.5 * (x[e.a] + x[e.b]));
  }
  return pos;
}

std::vector<int> FunctionSpace::boundary_dofs() const {
  std::vector<int> out;
  for (int c = 0; c < components(); ++c) {
    for (int s = 0; s < num_scalar_dofs_; ++s) {
      if (on_boundary_[s]) out.push_back(dof(c, s));
    }
  }
  return out;
}

std::array<double, 6> FunctionSpace::basis_values(const Vec2& xi) const {
  if (degree() == 2) return reference::p2_values(xi);
  const auto v = reference::p1_values(xi);
  return {v[0], v[1], v[2], 0.0, 0.0, 0.0};
}

std::array<Vec2, 6> FunctionSpace::basis_reference_gradients(const Vec2& xi) const {
  if (degree() == 2) return reference::p2_gradients(xi);
  const auto g = reference::p1_gradients();
  return {g[0], g[1], g[2], Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
}

TaylorHoodSpaces make_taylor_hood(std::shared_ptr<const ReferenceMesh> mesh) {
  return {std::make_shared<const FunctionSpace>(mesh, SpaceKind::Velocity),
          std::make_shared<const FunctionSpace>(mesh, SpaceKind::Pressure)};
}

double FeField::value(int cell, const Vec2& xi, int component) const {
  const auto dofs = space->cell_scalar_dofs(cell);
  const auto phi = space->basis_values(xi);
  double v = 0.0;
  for (int k = 0; k < space->dofs_per_cell(); ++k) {
    v += phi[k] * coefficients[space->dof(component, dofs[k])];
  }
  return v;
}

Vec2 FeField::vector_value(int cell, const Vec2& xi) const {
  if (space->components() == 1) return Vec2(value(cell, xi, 0), 0.0);
  return Vec2(value(cell, xi, 0), value(cell, xi, 1));
}

Mat2 FeField::gradient(const Configuration& config, int cell, const Vec2& xi) const {
  const auto geo = config.cell(cell);
  const auto dofs = space->cell_scalar_dofs(cell);
  const auto ref = space->basis_reference_gradients(xi);
  Mat2 g = Mat2::Zero();
  for (int k = 0; k < space->dofs_per_cell(); ++k) {
    const Vec2 grad = geo.physical_gradient(ref[k]);
    for (int c = 0; c < space->components(); ++c) {
      g.row(c) += coefficients[space->dof(c, dofs[k])] * grad.transpose();
    }
  }
  return g;
}

FeField interpolate(std::shared_ptr<const FunctionSpace> space, const Configuration& config,
                    const VectorFunction& field) {
  const auto pos = space->scalar_dof_positions(config);
  Eigen::VectorXd coeffs(space->num_dofs());
  for (int s = 0; s < space->num_scalar_dofs(); ++s) {
    const Vec2 v = field(pos[s]);
    for (int c = 0; c < space->components(); ++c) coeffs[space->dof(c, s)] = v[c];
  }
  return {std::move(space), std::move(coeffs), config.time()};
}

FeField interpolate_scalar(std::shared_ptr<const FunctionSpace> space, const Configuration& config,
                           const ScalarFunction& field) {
  if (space->components() != 1) throw InvalidArgument("interpolate_scalar needs a scalar space");
  const auto pos = space->scalar_dof_positions(config);
  Eigen::VectorXd coeffs(space->num_dofs());
  for (int s = 0; s < space->num_scalar_dofs(); ++s) coeffs[s] = field(pos[s]);
  return {std::move(space), std::move(coeffs), config.time()};
}

FieldNorms field_norms(const FeField& u, const Configuration& config) {
  const QuadratureRule rule = triangle_rule(4);
  const int nc = u.space->components();
  std::array<double, 2> comp_sq{0.0, 0.0};
  double grad_sq = 0.0;
  for (int k = 0; k < config.mesh().num_cells(); ++k) {
    const double det = std::abs(config.cell(k).determinant);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * det;
      for (int c = 0; c < nc; ++c) {
        const double v = u.value(k, rule.points[q], c);
        comp_sq[c] += w * v * v;
      }
      grad_sq += w * u.gradient(config, k, rule.points[q]).squaredNorm();
    }
  }
  FieldNorms n;
  n.l2 = std::sqrt(comp_sq[0] + comp_sq[1]);
  n.l12 = std::sqrt(comp_sq[0]) + std::sqrt(comp_sq[1]);
  n.h1_semi = std::sqrt(grad_sq);
  return n;
}

}  // namespace oseen_ale
