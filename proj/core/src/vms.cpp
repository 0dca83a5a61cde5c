#include "oseen_ale/vms.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "oseen_ale/errors.hpp"

namespace oseen_ale {

CoarseProjector::CoarseProjector(Configuration config, CoarseSpace coarse, int order)
    : config_(std::move(config)), coarse_(coarse), rule_(triangle_rule(order)) {
  const int m = coarse_dim();
  basis_.resize(rule_.size());
  Eigen::Matrix3d gram = Eigen::Matrix3d::Identity();
  gram.topLeftCorner(m, m).setZero();
  for (int q = 0; q < rule_.size(); ++q) {
    if (m == 1) {
      basis_[q] = {1.0, 0.0, 0.0};
    } else {
      basis_[q] = reference::p1_values(rule_.points[q]);
    }
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) gram(a, b) += rule_.weights[q] * basis_[q][a] * basis_[q][b];
    }
  }
  // The cell Gram matrix is |det J| times the reference one.
  reference_gram_inverse_ = gram.inverse();
}

std::vector<Vec2> CoarseProjector::project_cell(const std::vector<Vec2>& samples) const {
  const int m = coarse_dim();
  Eigen::Matrix<double, 3, 2> moments = Eigen::Matrix<double, 3, 2>::Zero();
  for (int q = 0; q < rule_.size(); ++q) {
    for (int a = 0; a < m; ++a) moments.row(a) += rule_.weights[q] * basis_[q][a] * samples[q].transpose();
  }
  const Eigen::Matrix<double, 3, 2> coeffs = reference_gram_inverse_ * moments;
  std::vector<Vec2> out(rule_.size(), Vec2::Zero());
  for (int q = 0; q < rule_.size(); ++q) {
    for (int a = 0; a < m; ++a) out[q] += basis_[q][a] * coeffs.row(a).transpose();
  }
  return out;
}

CellTensorField CoarseProjector::apply(const CellTensorField& g) const {
  CellTensorField out;
  out.samples.resize(g.samples.size());
  std::vector<Vec2> rows(rule_.size());
  for (std::size_t k = 0; k < g.samples.size(); ++k) {
    out.samples[k].assign(rule_.size(), Mat2::Zero());
    for (int r = 0; r < 2; ++r) {
      for (int q = 0; q < rule_.size(); ++q) rows[q] = g.samples[k][q].row(r).transpose();
      const auto projected = project_cell(rows);
      for (int q = 0; q < rule_.size(); ++q) out.samples[k][q].row(r) = projected[q].transpose();
    }
  }
  return out;
}

double CoarseProjector::inner(const CellTensorField& a, const CellTensorField& b) const {
  double s = 0.0;
  for (int k = 0; k < config_.mesh().num_cells(); ++k) {
    const double det = std::abs(config_.cell(k).determinant);
    for (int q = 0; q < rule_.size(); ++q) {
      s += rule_.weights[q] * det * (a.samples[k][q].array() * b.samples[k][q].array()).sum();
    }
  }
  return s;
}

CellTensorField CoarseProjector::sample(const std::function<Mat2(int, const Vec2&)>& g) const {
  CellTensorField out;
  out.samples.resize(config_.mesh().num_cells());
  for (int k = 0; k < config_.mesh().num_cells(); ++k) {
    const CellGeometry geo = config_.cell(k);
    for (const Vec2& xi : rule_.points) out.samples[k].push_back(g(k, geo.map(xi)));
  }
  return out;
}

CellTensorField CoarseProjector::sample_gradient(const FeField& u) const {
  CellTensorField out;
  out.samples.resize(config_.mesh().num_cells());
  for (int k = 0; k < config_.mesh().num_cells(); ++k) {
    for (const Vec2& xi : rule_.points) out.samples[k].push_back(u.gradient(config_, k, xi));
  }
  return out;
}

CoarseProjector build_projector(const FunctionSpace& velocity, const DiscreteAleMap& map, double tau,
                                CoarseSpace coarse) {
  Configuration config = map.configuration(tau);
  config.check_orientation();
  // Gradients of degree-p fields are degree p-1; the rule must integrate their squares.
  const int order = std::max(4, 2 * velocity.degree());
  return CoarseProjector(std::move(config), coarse, order);
}

FineScaleDiffusion assemble_fine_scale_diffusion(const CoarseProjector& projector, double mu_T,
                                                 const FunctionSpace& space) {
  if (mu_T < 0.0 || !std::isfinite(mu_T)) {
    throw NegativeViscosity("turbulent viscosity must be nonnegative, got " + std::to_string(mu_T));
  }
  const Configuration& config = projector.configuration();
  const QuadratureRule& rule = projector.rule();
  const int nd = space.dofs_per_cell();
  const int nq = rule.size();
  std::vector<Eigen::Triplet<double>> t;
  std::vector<std::vector<Vec2>> fine(nd, std::vector<Vec2>(nq));
  for (int k = 0; k < config.mesh().num_cells(); ++k) {
    const CellGeometry geo = config.cell(k);
    const double det = std::abs(geo.determinant);
    for (int a = 0; a < nd; ++a) {
      std::vector<Vec2> grad(nq);
      for (int q = 0; q < nq; ++q) {
        grad[q] = geo.physical_gradient(space.basis_reference_gradients(rule.points[q])[a]);
      }
      const auto coarse = projector.project_cell(grad);
      for (int q = 0; q < nq; ++q) fine[a][q] = grad[q] - coarse[q];
    }
    const auto dofs = space.cell_scalar_dofs(k);
    for (int a = 0; a < nd; ++a) {
      for (int b = 0; b < nd; ++b) {
        double v = 0.0;
        for (int q = 0; q < nq; ++q) v += rule.weights[q] * fine[a][q].dot(fine[b][q]);
        v *= mu_T * det;
        for (int c = 0; c < space.components(); ++c) {
          t.emplace_back(space.dof(c, dofs[a]), space.dof(c, dofs[b]), v);
        }
      }
    }
  }
  SparseMatrix s(space.num_dofs(), space.num_dofs());
  s.setFromTriplets(t.begin(), t.end());
  s.makeCompressed();
  return {mu_T, {std::move(s), true}};
}

ScaleSplit scale_split(const FeField& u, const CoarseProjector& projector) {
  ScaleSplit out;
  const CellTensorField g = projector.sample_gradient(u);
  out.coarse = projector.apply(g);
  out.fine = g;
  for (std::size_t k = 0; k < g.samples.size(); ++k) {
    for (std::size_t q = 0; q < g.samples[k].size(); ++q) out.fine.samples[k][q] -= out.coarse.samples[k][q];
  }
  return out;
}

}  // namespace oseen_ale
