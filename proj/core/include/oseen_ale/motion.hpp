#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oseen_ale/mesh.hpp"

namespace oseen_ale {

/// Prescribed analytic domain motion Y -> x(t, Y). The mapping starts at the
/// identity, i.e. displacement(0, Y) == Y.
struct MotionProgram {
  std::string name;
  std::function<Vec2(double t, const Vec2& y)> displacement;
  /// Exact time derivative of the displacement at fixed Y.
  std::function<Vec2(double t, const Vec2& y)> displacement_time_derivative;
  /// True when the displacement is affine in t (linear interpolation is exact).
  bool affine_in_time = false;
};

[[nodiscard]] MotionProgram stationary_motion();
[[nodiscard]] MotionProgram translation_motion(double vx, double vy);
/// x = (1 + alpha t) Y
[[nodiscard]] MotionProgram expansion_motion(double alpha);
/// x = (Y1 + gamma t Y2, Y2)
[[nodiscard]] MotionProgram shear_motion(double gamma);
/// x = (1 + amplitude t sin(pi Y1)) Y
[[nodiscard]] MotionProgram smooth_expansion_motion(double amplitude);
/// x = (1 + beta t^2) Y
[[nodiscard]] MotionProgram quadratic_expansion_motion(double beta);

/// Looks a motion up by registry name. Missing parameters fall back to the
/// defaults listed in motion_registry_names(). Throws ConfigError.
[[nodiscard]] MotionProgram make_motion(const std::string& name,
                                        const std::vector<double>& params = {});

[[nodiscard]] std::vector<std::string> motion_registry_names();

}  // namespace oseen_ale
