#pragma once

#include <functional>
#include <vector>

#include "oseen_ale/ale_map.hpp"
#include "oseen_ale/assembly.hpp"
#include "oseen_ale/fe_space.hpp"
#include "oseen_ale/quadrature.hpp"

namespace oseen_ale {

/// Coarse tensor space L_H onto which gradients are projected, cell by cell.
enum class CoarseSpace {
  CellwiseConstant,
  /// Discontinuous linear tensors. Contains every P2 gradient, so the fine part vanishes.
  CellwiseLinear,
};

/// Tensor field sampled at the projector's quadrature points: samples[cell][point].
struct CellTensorField {
  std::vector<std::vector<Mat2>> samples;
};

class CoarseProjector {
 public:
  CoarseProjector(Configuration config, CoarseSpace coarse, int order = 4);

  [[nodiscard]] const Configuration& configuration() const noexcept { return config_; }
  [[nodiscard]] CoarseSpace coarse_space() const noexcept { return coarse_; }
  [[nodiscard]] const QuadratureRule& rule() const noexcept { return rule_; }

  /// Elementwise L2 projection onto the coarse space.
  [[nodiscard]] CellTensorField apply(const CellTensorField& g) const;
  /// L2 inner product of two sampled fields on the configuration.
  [[nodiscard]] double inner(const CellTensorField& a, const CellTensorField& b) const;
  [[nodiscard]] CellTensorField sample(const std::function<Mat2(int cell, const Vec2& x)>& g) const;
  [[nodiscard]] CellTensorField sample_gradient(const FeField& u) const;

  /// Projects vector samples taken at the rule's points of a single cell. The result does
  /// not depend on the cell because the |det J| factors cancel on affine cells.
  [[nodiscard]] std::vector<Vec2> project_cell(const std::vector<Vec2>& samples) const;

 private:
  [[nodiscard]] int coarse_dim() const noexcept { return coarse_ == CoarseSpace::CellwiseConstant ? 1 : 3; }

  Configuration config_;
  CoarseSpace coarse_;
  QuadratureRule rule_;
  // Coarse basis values at the quadrature points: basis_[q][m].
  std::vector<std::array<double, 3>> basis_;
  Eigen::Matrix3d reference_gram_inverse_;
};

[[nodiscard]] CoarseProjector build_projector(const FunctionSpace& velocity, const DiscreteAleMap& map,
                                              double tau,
                                              CoarseSpace coarse = CoarseSpace::CellwiseConstant);

struct FineScaleDiffusion {
  double mu_T = 0.0;
  AssembledOperator op;
};

/// S_ij = mu_T int (I - P) grad phi_j : (I - P) grad phi_i. Throws NegativeViscosity.
[[nodiscard]] FineScaleDiffusion assemble_fine_scale_diffusion(const CoarseProjector& projector,
                                                               double mu_T,
                                                               const FunctionSpace& space);

struct ScaleSplit {
  CellTensorField coarse;  // P grad u
  CellTensorField fine;    // (I - P) grad u
};

[[nodiscard]] ScaleSplit scale_split(const FeField& u, const CoarseProjector& projector);

}  // namespace oseen_ale
