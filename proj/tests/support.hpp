#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include <Eigen/Core>

#include "oseen_ale/ale_map.hpp"
#include "oseen_ale/fe_space.hpp"
#include "oseen_ale/mesh.hpp"

namespace oseen_ale::testing {

inline std::shared_ptr<const ReferenceMesh> square(int nx, int ny = -1) {
  return std::make_shared<const ReferenceMesh>(make_unit_square(nx, ny < 0 ? nx : ny));
}

inline std::shared_ptr<const DiscreteAleMap> shared_map(std::shared_ptr<const ReferenceMesh> mesh,
                                                        const MotionProgram& motion, TimeGrid grid) {
  return std::make_shared<const DiscreteAleMap>(DiscreteAleMap::build(std::move(mesh), motion, grid));
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline FeField random_field(std::shared_ptr<const FunctionSpace> space, std::mt19937_64& rng,
                            double config_time = 0.0) {
  FeField f{space, random_vector(space->num_dofs(), rng), config_time};
  return f;
}

// Zeroes the coefficients of boundary dofs.
inline void clear_boundary(FeField& f) {
  for (int d : f.space->boundary_dofs()) f.coefficients[d] = 0.0;
}

}  // namespace oseen_ale::testing
