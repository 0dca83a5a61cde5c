#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oseen_ale/ale_map.hpp"

namespace oseen_ale {

using TimeVectorFunction = std::function<Vec2(double t, const Vec2& x)>;
using TimeScalarFunction = std::function<double(double t, const Vec2& x)>;

/// Data of one Oseen problem in Eulerian coordinates:
///   du/dt + (u* . grad) u - 2 mu lap u + grad p = f,  div u = 0,  u = g on the boundary.
struct FlowProblem {
  std::string name;
  AnalyticField ustar;
  /// Forcing; may depend on mu (captured when the problem is made).
  TimeVectorFunction forcing;
  TimeVectorFunction boundary;
  std::function<Vec2(const Vec2& x)> initial;
  /// Exact velocity and pressure when known (empty otherwise).
  TimeVectorFunction exact_velocity;
  TimeScalarFunction exact_pressure;
  bool homogeneous_boundary = true;
};

/// Manufactured solution on the moving unit square: u = curl psi with
/// psi = sin^2(pi x) sin^2(pi y) (1 + t/2), p = sin(2 pi x) cos(2 pi y) t, u* = u(0, .).
struct ManufacturedSolution {
  [[nodiscard]] static Vec2 velocity(double t, const Vec2& x);
  [[nodiscard]] static Mat2 velocity_gradient(double t, const Vec2& x);
  [[nodiscard]] static Vec2 velocity_laplacian(double t, const Vec2& x);
  [[nodiscard]] static Vec2 velocity_time_derivative(double t, const Vec2& x);
  [[nodiscard]] static double pressure(double t, const Vec2& x);
  [[nodiscard]] static Vec2 pressure_gradient(double t, const Vec2& x);
  [[nodiscard]] static Vec2 forcing(double t, const Vec2& x, double mu);
};

/// Rigid rotation about the square's center, (-(y - 1/2), x - 1/2). Linear and divergence-free.
[[nodiscard]] AnalyticField rotation_field(double omega = 1.0);

/// Registry: "zero", "decay", "forced", "uniform", "manufactured". Throws ConfigError.
[[nodiscard]] FlowProblem make_problem(const std::string& name, double mu);
[[nodiscard]] std::vector<std::string> problem_registry_names();

}  // namespace oseen_ale
