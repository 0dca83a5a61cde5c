#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "oseen_ale/mesh.hpp"
#include "oseen_ale/motion.hpp"
#include "oseen_ale/quadrature.hpp"

namespace oseen_ale {

/// Uniform time grid t^n = start + n*dt, n = 0..num_steps.
struct TimeGrid {
  double start = 0.0;
  double dt = 0.1;
  int num_steps = 1;

  [[nodiscard]] double time(int n) const noexcept { return start + n * dt; }
  [[nodiscard]] double end() const noexcept { return time(num_steps); }
};

/// Affine map from the reference triangle onto one cell of a configuration.
struct CellGeometry {
  Vec2 origin;
  Mat2 jacobian;  // columns x1 - x0, x2 - x0
  Mat2 inverse;
  double determinant;

  [[nodiscard]] Vec2 map(const Vec2& xi) const { return origin + jacobian * xi; }
  /// Converts a reference-coordinate gradient (row vector as Vec2) into a physical one.
  [[nodiscard]] Vec2 physical_gradient(const Vec2& ref_grad) const {
    return inverse.transpose() * ref_grad;
  }
};

/// Vertex positions of the triangulation at one instant.
class Configuration {
 public:
  Configuration(std::shared_ptr<const ReferenceMesh> mesh, std::vector<Vec2> vertices, double time);

  [[nodiscard]] const ReferenceMesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const ReferenceMesh>& mesh_ptr() const noexcept { return mesh_; }
  [[nodiscard]] const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] double time() const noexcept { return time_; }

  [[nodiscard]] CellGeometry cell(int c) const;
  /// Throws InvertedCell when any cell has det <= 0.
  void check_orientation() const;
  [[nodiscard]] double area() const;

 private:
  std::shared_ptr<const ReferenceMesh> mesh_;
  std::vector<Vec2> vertices_;
  double time_;
};

/// Piecewise-constant-in-time mesh velocity of one interval (t^n, t^{n+1}],
/// stored at mesh vertices. Linear in space on every cell.
struct MeshVelocityField {
  int interval_index = 0;
  std::vector<Vec2> nodal_values;

  /// Value at reference coordinates xi of cell c.
  [[nodiscard]] Vec2 value(const ReferenceMesh& mesh, int c, const Vec2& xi) const;
  /// Gradient dw_i/dx_j on cell c of the given configuration (constant per cell).
  [[nodiscard]] Mat2 gradient(const Configuration& config, int c) const;
  [[nodiscard]] double divergence(const Configuration& config, int c) const {
    return gradient(config, c).trace();
  }
};

/// Time-discrete ALE mapping: exact motion at the grid times, linear interpolation in between.
class DiscreteAleMap {
 public:
  /// Throws InvertedCell if any cell degenerates at a grid time or interval midpoint.
  static DiscreteAleMap build(std::shared_ptr<const ReferenceMesh> mesh, const MotionProgram& motion,
                              const TimeGrid& grid);

  [[nodiscard]] const ReferenceMesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const ReferenceMesh>& mesh_ptr() const noexcept { return mesh_; }
  [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] const MotionProgram& motion() const noexcept { return motion_; }

  [[nodiscard]] std::span<const Vec2> positions(int n) const;
  /// Interval index n with tau in [t^n, t^{n+1}]; grid end maps to the last interval.
  [[nodiscard]] int interval_of(double tau) const;
  [[nodiscard]] std::vector<Vec2> positions_at(double tau) const;
  [[nodiscard]] Configuration configuration(double tau) const;
  [[nodiscard]] Configuration configuration_at_step(int n) const;

  /// Deformation gradient D_Y A of cell c at time tau (constant per cell).
  [[nodiscard]] Mat2 deformation_gradient(double tau, int c) const;
  [[nodiscard]] double jacobian_determinant(double tau, int c) const {
    return deformation_gradient(tau, c).determinant();
  }

  /// Throws IndexOutOfRange unless 0 <= n < num_steps.
  [[nodiscard]] MeshVelocityField mesh_velocity(int n) const;

 private:
  DiscreteAleMap(std::shared_ptr<const ReferenceMesh> mesh, MotionProgram motion, TimeGrid grid,
                 std::vector<std::vector<Vec2>> positions);

  std::shared_ptr<const ReferenceMesh> mesh_;
  MotionProgram motion_;
  TimeGrid grid_;
  std::vector<std::vector<Vec2>> positions_;
};

/// Both sides of the discrete GCL for the scalar P2 basis pair (i, j) on interval n.
struct GclBalance {
  double mass_change;    // M_{n+1}(i,j) - M_n(i,j)
  double flux_integral;  // time quadrature of int phi_i phi_j div(w_h)
  double mass_scale;     // max(|M_n(i,j)|, |M_{n+1}(i,j)|)

  [[nodiscard]] double defect() const noexcept { return mass_change - flux_integral; }
  [[nodiscard]] double relative() const noexcept;
};

[[nodiscard]] GclBalance gcl_balance(const DiscreteAleMap& map, int n, int phi_i, int phi_j,
                                     const TimeQuadrature& time_rule);

/// |LHS - RHS| of the GCL relative to the pair's mass entry (0 when both sides vanish).
/// phi_i, phi_j index the scalar P2 basis (vertices first, then edges).
[[nodiscard]] double gcl_residual(const DiscreteAleMap& map, int n, int phi_i, int phi_j,
                                  const TimeQuadrature& time_rule);

/// Scalar P2 basis pairs (i, j) whose supports share a cell, drawn with a seeded generator.
[[nodiscard]] std::vector<std::pair<int, int>> sample_basis_pairs(const ReferenceMesh& mesh, int count,
                                                                  std::uint64_t seed);

/// Largest gcl_residual over the given pairs and every interval of the map.
[[nodiscard]] double max_gcl_residual(const DiscreteAleMap& map,
                                      const std::vector<std::pair<int, int>>& pairs,
                                      const TimeQuadrature& time_rule);

/// Mesh velocity used on the right side of the transport identity.
enum class TransportVelocity {
  /// The discrete w_h of the interval; the identity then holds for every motion.
  Discrete,
  /// The exact motion velocity at t^{n+1}, interpolated at the vertices.
  EndpointExact,
};

struct TransportBalance {
  double rate;        // (I(t^{n+1}) - I(t^n)) / dt
  double flux;        // time average of int phi div(w) over the interval
  double scale;       // int |phi| over Omega_{t^n}
  [[nodiscard]] double relative() const noexcept;
};

[[nodiscard]] TransportBalance transport_balance(const DiscreteAleMap& map,
                                                 const std::function<double(const Vec2&)>& phi_ref,
                                                 int n, TransportVelocity velocity,
                                                 const TimeQuadrature& time_rule = TimeQuadrature::gauss(5));

/// Relative residual of the Reynolds transport identity on interval n for a
/// scalar phi given on the reference domain.
[[nodiscard]] double transport_residual(const DiscreteAleMap& map,
                                        const std::function<double(const Vec2&)>& phi_ref, int n,
                                        TransportVelocity velocity = TransportVelocity::EndpointExact);

/// Analytic vector field with its spatial gradient (rows: components, cols: derivatives).
struct AnalyticField {
  std::function<Vec2(double t, const Vec2& x)> value;
  std::function<Mat2(double t, const Vec2& x)> gradient;

  [[nodiscard]] double divergence(double t, const Vec2& x) const { return gradient(t, x).trace(); }
  [[nodiscard]] static AnalyticField zero();
};

/// Sup norms entering the time-step admissibility condition. Matrix norms use the max row sum.
struct MappingNorms {
  double sup_grad_w_hat = 0.0;  // |D_Y w_hat| on Omega_0
  double sup_grad_map = 0.0;    // |D_Y A| over the interval
  double sup_div_w = 0.0;       // |div w_h| on Omega_{t^{n+1}}
  double sup_div_ustar = 0.0;   // |div u*| on Omega_{t^{n+1}}
};

[[nodiscard]] double max_row_sum(const Mat2& m);

/// Sup norms on interval n. The u* divergence is sampled at the vertices and at
/// the points of a triangle rule of `sample_order`.
[[nodiscard]] MappingNorms mapping_norms(const DiscreteAleMap& map, const AnalyticField& ustar, int n,
                                         int sample_order = 4);

}  // namespace oseen_ale
