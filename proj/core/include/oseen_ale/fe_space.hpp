#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "oseen_ale/ale_map.hpp"
#include "oseen_ale/mesh.hpp"

namespace oseen_ale {

// Reference Lagrange bases on the unit triangle. Local P2 numbering: vertices
// 0..2, then edge midpoints (0,1), (1,2), (2,0).
namespace reference {

inline constexpr int kP1Size = 3;
inline constexpr int kP2Size = 6;

[[nodiscard]] std::array<double, kP1Size> p1_values(const Vec2& xi);
[[nodiscard]] std::array<Vec2, kP1Size> p1_gradients();
[[nodiscard]] std::array<double, kP2Size> p2_values(const Vec2& xi);
[[nodiscard]] std::array<Vec2, kP2Size> p2_gradients(const Vec2& xi);
/// Reference coordinates of the local P2 nodes.
[[nodiscard]] const std::array<Vec2, kP2Size>& p2_nodes();

}  // namespace reference

enum class SpaceKind {
  Velocity,  // continuous P2, two components
  Pressure,  // continuous P1, scalar
};

/// Continuous Lagrange space on the reference triangulation. Vector spaces are
/// component-blocked: global dof = component * num_scalar_dofs + scalar dof.
class FunctionSpace {
 public:
  FunctionSpace(std::shared_ptr<const ReferenceMesh> mesh, SpaceKind kind);

  [[nodiscard]] SpaceKind kind() const noexcept { return kind_; }
  [[nodiscard]] int degree() const noexcept { return kind_ == SpaceKind::Velocity ? 2 : 1; }
  [[nodiscard]] int components() const noexcept { return kind_ == SpaceKind::Velocity ? 2 : 1; }
  [[nodiscard]] int dofs_per_cell() const noexcept { return degree() == 2 ? 6 : 3; }
  [[nodiscard]] int num_scalar_dofs() const noexcept { return num_scalar_dofs_; }
  [[nodiscard]] int num_dofs() const noexcept { return components() * num_scalar_dofs_; }
  [[nodiscard]] const ReferenceMesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const ReferenceMesh>& mesh_ptr() const noexcept { return mesh_; }

  /// Scalar dof indices of a cell in local order.
  [[nodiscard]] std::array<int, 6> cell_scalar_dofs(int cell) const;
  [[nodiscard]] int dof(int component, int scalar) const noexcept {
    return component * num_scalar_dofs_ + scalar;
  }

  /// Physical positions of the scalar dofs in a configuration.
  [[nodiscard]] std::vector<Vec2> scalar_dof_positions(const Configuration& config) const;
  [[nodiscard]] const std::vector<bool>& scalar_on_boundary() const noexcept { return on_boundary_; }
  /// All (vector) dofs on the domain boundary, ascending.
  [[nodiscard]] std::vector<int> boundary_dofs() const;

  /// Scalar basis values at reference point xi (length dofs_per_cell).
  [[nodiscard]] std::array<double, 6> basis_values(const Vec2& xi) const;
  [[nodiscard]] std::array<Vec2, 6> basis_reference_gradients(const Vec2& xi) const;

 private:
  std::shared_ptr<const ReferenceMesh> mesh_;
  SpaceKind kind_;
  int num_scalar_dofs_;
  std::vector<bool> on_boundary_;
};

/// The Taylor-Hood pair on one triangulation.
struct TaylorHoodSpaces {
  std::shared_ptr<const FunctionSpace> velocity;
  std::shared_ptr<const FunctionSpace> pressure;
};

[[nodiscard]] TaylorHoodSpaces make_taylor_hood(std::shared_ptr<const ReferenceMesh> mesh);

/// Coefficient vector over a space; integrals are taken on the configuration at config_time.
struct FeField {
  std::shared_ptr<const FunctionSpace> space;
  Eigen::VectorXd coefficients;
  double config_time = 0.0;

  /// Value of component `component` at reference point xi of a cell.
  [[nodiscard]] double value(int cell, const Vec2& xi, int component = 0) const;
  [[nodiscard]] Vec2 vector_value(int cell, const Vec2& xi) const;
  /// Gradient tensor (rows: components) at xi of cell on the given configuration.
  [[nodiscard]] Mat2 gradient(const Configuration& config, int cell, const Vec2& xi) const;
};

using VectorFunction = std::function<Vec2(const Vec2& x)>;
using ScalarFunction = std::function<double(const Vec2& x)>;

/// Nodal interpolation of an analytic field at the dof positions of the configuration.
[[nodiscard]] FeField interpolate(std::shared_ptr<const FunctionSpace> space,
                                  const Configuration& config, const VectorFunction& field);
[[nodiscard]] FeField interpolate_scalar(std::shared_ptr<const FunctionSpace> space,
                                         const Configuration& config, const ScalarFunction& field);

struct FieldNorms {
  double l2 = 0.0;       // (sum_i int |u_i|^2)^(1/2)
  double h1_semi = 0.0;  // (sum_ij int |du_i/dx_j|^2)^(1/2)
  double l12 = 0.0;      // sum_i (int |u_i|^2)^(1/2)
};

[[nodiscard]] FieldNorms field_norms(const FeField& u, const Configuration& config);

}  // namespace oseen_ale
