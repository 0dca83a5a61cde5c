#include "oseen_ale/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "oseen_ale/errors.hpp"
#include "oseen_ale/quadrature.hpp"

namespace oseen_ale {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Basis values and physical gradients of one cell at one quadrature point.
struct PointBasis {
  std::array<double, 6> phi;
  std::array<Vec2, 6> grad;
  Vec2 x;
  double weight;  // quadrature weight times |det J|
};

std::vector<PointBasis> cell_basis(const FunctionSpace& space, const CellGeometry& geo,
                                   const QuadratureRule& rule) {
  std::vector<PointBasis> out(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    const Vec2& xi = rule.points[q];
    out[q].phi = space.basis_values(xi);
    const auto ref = space.basis_reference_gradients(xi);
    for (int a = 0; a < space.dofs_per_cell(); ++a) out[q].grad[a] = geo.physical_gradient(ref[a]);
    out[q].x = geo.map(xi);
    out[q].weight = rule.weights[q] * std::abs(geo.determinant);
  }
  return out;
}

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Adds a scalar local matrix to every component block of a vector space.
void scatter_blocks(const FunctionSpace& space, const std::array<int, 6>& dofs,
                    const Eigen::Matrix<double, 6, 6>& local, Triplets& t) {
  const int nd = space.dofs_per_cell();
  for (int c = 0; c < space.components(); ++c) {
    for (int a = 0; a < nd; ++a) {
      for (int b = 0; b < nd; ++b) {
        t.emplace_back(space.dof(c, dofs[a]), space.dof(c, dofs[b]), local(a, b));
      }
    }
  }
}

Configuration checked_configuration(const DiscreteAleMap& map, double tau) {
  Configuration c = map.configuration(tau);
  c.check_orientation();
  return c;
}

}  // namespace

Advector relative_advector(const AnalyticField& ustar, double t, const MeshVelocityField* w,
                           const Configuration& config) {
  std::vector<double> div_w;
  if (w != nullptr) {
    div_w.resize(config.mesh().num_cells());
    for (int k = 0; k < config.mesh().num_cells(); ++k) div_w[k] = w->divergence(config, k);
  }
  std::optional<MeshVelocityField> wcopy;
  if (w != nullptr) wcopy = *w;
  return [ustar, t, wcopy = std::move(wcopy), mesh = config.mesh_ptr(), div_w = std::move(div_w)](
             int cell, const Vec2& xi, const Vec2& x) {
    AdvectorSample s;
    s.value = ustar.value(t, x);
    s.divergence = ustar.divergence(t, x);
    if (wcopy) {
      s.value -= wcopy->value(*mesh, cell, xi);
      s.divergence -= div_w[cell];
    }
    return s;
  };
}

Advector field_advector(const FeField& a, const Configuration& config) {
  return [a, config](int cell, const Vec2& xi, const Vec2&) {
    AdvectorSample s;
    s.value = a.vector_value(cell, xi);
    s.divergence = a.gradient(config, cell, xi).trace();
    return s;
  };
}

AssembledOperator assemble_mass(const FunctionSpace& space, const Configuration& config, int order) {
  const QuadratureRule rule = triangle_rule(order);
  const int nd = space.dofs_per_cell();
  Triplets t;
  t.reserve(static_cast<std::size_t>(config.mesh().num_cells()) * nd * nd * space.components());
  for (int k = 0; k < config.mesh().num_cells(); ++k) {
    const auto pts = cell_basis(space, config.cell(k), rule);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (const auto& p : pts) {
      for (int a = 0; a < nd; ++a) {
        for (int b = 0; b < nd; ++b) local(a, b) += p.weight * p.phi[a] * p.phi[b];
      }
    }
    scatter_blocks(space, space.cell_scalar_dofs(k), local, t);
  }
  return {from_triplets(space.num_dofs(), space.num_dofs(), t), true};
}

AssembledOperator assemble_diffusion(const FunctionSpace& space, const Configuration& config,
                                     ViscousForm form) {
  const QuadratureRule rule = triangle_rule(2 * (space.degree() - 1));
  const int nd = space.dofs_per_cell();
  const int nc = space.components();
  Triplets t;
  for (int k = 0; k < config.mesh().num_cells(); ++k) {
    const auto pts = cell_basis(space, config.cell(k), rule);
    const auto dofs = space.cell_scalar_dofs(k);
    if (form == ViscousForm::Gradient || nc == 1) {
      Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
      for (const auto& p : pts) {
        for (int a = 0; a < nd; ++a) {
          for (int b = 0; b < nd; ++b) local(a, b) += p.weight * p.grad[a].dot(p.grad[b]);
        }
      }
      scatter_blocks(space, dofs, local, t);
      continue;
    }
    // D(e_c g) : D(e_d h) = (delta_cd g.h + g_d h_c) / 2
    for (int c = 0; c < nc; ++c) {
      for (int d = 0; d < nc; ++d) {
        for (int a = 0; a < nd; ++a) {
          for (int b = 0; b < nd; ++b) {
            double v = 0.0;
            for (const auto& p : pts) {
              const double same = c == d ? p.grad[a].dot(p.grad[b]) : 0.0;
              v += p.weight * 0.5 * (same + p.grad[a][d] * p.grad[b][c]);
            }
            t.emplace_back(space.dof(c, dofs[a]), space.dof(d, dofs[b]), v);
          }
        }
      }
    }
  }
  return {from_triplets(space.num_dofs(), space.num_dofs(), t), true};
}

AssembledOperator assemble_convection(const FunctionSpace& space, const Configuration& config,
                                      const Advector& advector, ConvectionForm form, int order) {
  const QuadratureRule rule = triangle_rule(order);
  const int nd = space.dofs_per_cell();
  Triplets t;
  for (int k = 0; k < config.mesh().num_cells(); ++k) {
    const auto pts = cell_basis(space, config.cell(k), rule);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (int q = 0; q < rule.size(); ++q) {
      const auto& p = pts[q];
      const AdvectorSample a = advector(k, rule.points[q], p.x);
      const double div = form == ConvectionForm::Conservative ? a.divergence : 0.0;
      for (int i = 0; i < nd; ++i) {
        for (int j = 0; j < nd; ++j) {
          local(i, j) += p.weight * p.phi[i] * (a.value.dot(p.grad[j]) + div * p.phi[j]);
        }
      }
    }
    scatter_blocks(space, space.cell_scalar_dofs(k), local, t);
  }
  return {from_triplets(space.num_dofs(), space.num_dofs(), t), false};
}

AssembledOperator assemble_divergence(const FunctionSpace& velocity, const FunctionSpace& pressure,
                                      const Configuration& config) {
  const QuadratureRule rule = triangle_rule(velocity.degree() + pressure.degree() - 1);
  Triplets t;
  for (int k = 0; k < config.mesh().num_cells(); ++k) {
    const CellGeometry geo = config.cell(k);
    const auto vpts = cell_basis(velocity, geo, rule);
    const auto ppts = cell_basis(pressure, geo, rule);
    const auto vdofs = velocity.cell_scalar_dofs(k);
    const auto pdofs = pressure.cell_scalar_dofs(k);
    for (int qd = 0; qd < pressure.dofs_per_cell(); ++qd) {
      for (int c = 0; c < velocity.components(); ++c) {
        for (int b = 0; b < velocity.dofs_per_cell(); ++b) {
          double v = 0.0;
          for (int q = 0; q < rule.size(); ++q) {
            v += vpts[q].weight * ppts[q].phi[qd] * vpts[q].grad[b][c];
          }
          t.emplace_back(pdofs[qd], velocity.dof(c, vdofs[b]), v);
        }
      }
    }
  }
  return {from_triplets(pressure.num_dofs(), velocity.num_dofs(), t), false};
}

Eigen::VectorXd assemble_pressure_mean(const FunctionSpace& pressure, const Configuration& config) {
  const QuadratureRule rule = triangle_rule(pressure.degree());
  Eigen::VectorXd m = Eigen::VectorXd::Zero(pressure.num_dofs());
  for (int k = 0; k < config.mesh().num_cells(); ++k) {
    const auto pts = cell_basis(pressure, config.cell(k), rule);
    const auto dofs = pressure.cell_scalar_dofs(k);
    for (const auto& p : pts) {
      for (int a = 0; a < pressure.dofs_per_cell(); ++a) m[dofs[a]] += p.weight * p.phi[a];
    }
  }
  return m;
}

Eigen::VectorXd assemble_load(const FunctionSpace& space, const Configuration& config,
                              const VectorFunction& f, int order) {
  const QuadratureRule rule = triangle_rule(order);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_dofs());
  for (int k = 0; k < config.mesh().num_cells(); ++k) {
    const auto pts = cell_basis(space, config.cell(k), rule);
    const auto dofs = space.cell_scalar_dofs(k);
    for (const auto& p : pts) {
      const Vec2 fv = f(p.x);
      for (int c = 0; c < space.components(); ++c) {
        for (int a = 0; a < space.dofs_per_cell(); ++a) {
          out[space.dof(c, dofs[a])] += p.weight * fv[c] * p.phi[a];
        }
      }
    }
  }
  return out;
}

AssembledOperator assemble_mass(const FunctionSpace& space, const DiscreteAleMap& map, double tau) {
  return assemble_mass(space, checked_configuration(map, tau));
}

AssembledOperator assemble_diffusion(const FunctionSpace& space, const DiscreteAleMap& map,
                                     double tau) {
  return assemble_diffusion(space, checked_configuration(map, tau));
}

AssembledOperator assemble_convection(const FunctionSpace& space, const DiscreteAleMap& map,
                                      double tau, const Advector& advector, ConvectionForm form) {
  return assemble_convection(space, checked_configuration(map, tau), advector, form);
}

AssembledOperator assemble_divergence(const FunctionSpace& velocity, const FunctionSpace& pressure,
                                      const DiscreteAleMap& map, double tau) {
  return assemble_divergence(velocity, pressure, checked_configuration(map, tau));
}

Eigen::VectorXd assemble_load(const FunctionSpace& space, const DiscreteAleMap& map, double tau,
                              const VectorFunction& f) {
  return assemble_load(space, checked_configuration(map, tau), f);
}

double asymmetry(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  double max_diff = 0.0;
  double max_val = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      max_diff = std::max(max_diff, std::abs(it.value()));
    }
  }
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) max_val = std::max(max_val, std::abs(it.value()));
  }
  return max_val > 0.0 ? max_diff / max_val : 0.0;
}

}  // namespace oseen_ale
