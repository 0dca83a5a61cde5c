#pragma once

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "oseen_ale/ale_map.hpp"
#include "oseen_ale/fe_space.hpp"

namespace oseen_ale {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct AssembledOperator {
  SparseMatrix matrix;
  bool symmetric = false;

  [[nodiscard]] Eigen::Index rows() const noexcept { return matrix.rows(); }
  [[nodiscard]] Eigen::Index cols() const noexcept { return matrix.cols(); }
};

enum class ViscousForm {
  Gradient,           // (grad u, grad v)
  SymmetricGradient,  // (D(u), D(v)), D(u) = (grad u + grad u^T) / 2
};

enum class ConvectionForm {
  Advective,     // ((a . grad) u, v)
  Conservative,  // ((a . grad) u, v) + (div(a) u, v)
};

/// Convecting field sampled at a quadrature point: value and divergence.
struct AdvectorSample {
  Vec2 value = Vec2::Zero();
  double divergence = 0.0;
};

/// Evaluated at (cell, reference point, physical point) of the assembly configuration.
using Advector = std::function<AdvectorSample(int cell, const Vec2& xi, const Vec2& x)>;

/// a = u*(t, x) - w_h, with div a = div u* - div w_h. Pass nullptr for w = 0.
[[nodiscard]] Advector relative_advector(const AnalyticField& ustar, double t,
                                         const MeshVelocityField* w, const Configuration& config);
/// Advection by a finite-element field living on the same configuration.
[[nodiscard]] Advector field_advector(const FeField& a, const Configuration& config);

[[nodiscard]] AssembledOperator assemble_mass(const FunctionSpace& space, const Configuration& config,
                                              int order = 4);
[[nodiscard]] AssembledOperator assemble_diffusion(const FunctionSpace& space,
                                                   const Configuration& config,
                                                   ViscousForm form = ViscousForm::Gradient);
[[nodiscard]] AssembledOperator assemble_convection(const FunctionSpace& space,
                                                    const Configuration& config,
                                                    const Advector& advector,
                                                    ConvectionForm form = ConvectionForm::Advective,
                                                    int order = 4);
/// B(q, i) = int q div(phi_i).
[[nodiscard]] AssembledOperator assemble_divergence(const FunctionSpace& velocity,
                                                    const FunctionSpace& pressure,
                                                    const Configuration& config);
/// m(q) = int q, the row enforcing zero-mean pressure.
[[nodiscard]] Eigen::VectorXd assemble_pressure_mean(const FunctionSpace& pressure,
                                                     const Configuration& config);
[[nodiscard]] Eigen::VectorXd assemble_load(const FunctionSpace& space, const Configuration& config,
                                            const VectorFunction& f, int order = 4);

// Same operators on the configuration of a discrete map at time tau. Each checks orientation first.
[[nodiscard]] AssembledOperator assemble_mass(const FunctionSpace& space, const DiscreteAleMap& map,
                                              double tau);
[[nodiscard]] AssembledOperator assemble_diffusion(const FunctionSpace& space,
                                                   const DiscreteAleMap& map, double tau);
[[nodiscard]] AssembledOperator assemble_convection(const FunctionSpace& space,
                                                    const DiscreteAleMap& map, double tau,
                                                    const Advector& advector,
                                                    ConvectionForm form = ConvectionForm::Advective);
[[nodiscard]] AssembledOperator assemble_divergence(const FunctionSpace& velocity,
                                                    const FunctionSpace& pressure,
                                                    const DiscreteAleMap& map, double tau);
[[nodiscard]] Eigen::VectorXd assemble_load(const FunctionSpace& space, const DiscreteAleMap& map,
                                            double tau, const VectorFunction& f);

/// Relative asymmetry max|A - A^T| / max|A| (0 for the zero matrix).
[[nodiscard]] double asymmetry(const SparseMatrix& a);

}  // namespace oseen_ale
