#include "oseen_ale/problems.hpp"

#include <cmath>
#include <numbers>

#include "oseen_ale/errors.hpp"

namespace oseen_ale {

namespace {

constexpr double kPi = std::numbers::pi;

double growth(double t) { return 1.0 + 0.5 * t; }

Vec2 zero_vector(double, const Vec2&) { return Vec2::Zero(); }

}  // namespace

Vec2 ManufacturedSolution::velocity(double t, const Vec2& x) {
  const double sx = std::sin(kPi * x[0]);
  const double sy = std::sin(kPi * x[1]);
  const double g = growth(t);
  return {kPi * sx * sx * std::sin(2.0 * kPi * x[1]) * g,
          -kPi * std::sin(2.0 * kPi * x[0]) * sy * sy * g};
}

Mat2 ManufacturedSolution::velocity_gradient(double t, const Vec2& x) {
  const double sx = std::sin(kPi * x[0]);
  const double sy = std::sin(kPi * x[1]);
  const double s2x = std::sin(2.0 * kPi * x[0]);
  const double s2y = std::sin(2.0 * kPi * x[1]);
  const double c2x = std::cos(2.0 * kPi * x[0]);
  const double c2y = std::cos(2.0 * kPi * x[1]);
  const double k = kPi * kPi * growth(t);
  Mat2 g;
  g << k * s2x * s2y, 2.0 * k * sx * sx * c2y,
      -2.0 * k * c2x * sy * sy, -k * s2x * s2y;
  return g;
}

Vec2 ManufacturedSolution::velocity_laplacian(double t, const Vec2& x) {
  const double k = 2.0 * kPi * kPi * kPi * growth(t);
  return {k * std::sin(2.0 * kPi * x[1]) * (2.0 * std::cos(2.0 * kPi * x[0]) - 1.0),
          -k * std::sin(2.0 * kPi * x[0]) * (2.0 * std::cos(2.0 * kPi * x[1]) - 1.0)};
}

Vec2 ManufacturedSolution::velocity_time_derivative(double t, const Vec2& x) {
  return velocity(t, x) * (0.5 / growth(t));
}

double ManufacturedSolution::pressure(double t, const Vec2& x) {
  return std::sin(2.0 * kPi * x[0]) * std::cos(2.0 * kPi * x[1]) * t;
}

Vec2 ManufacturedSolution::pressure_gradient(double t, const Vec2& x) {
  return {2.0 * kPi * std::cos(2.0 * kPi * x[0]) * std::cos(2.0 * kPi * x[1]) * t,
          -2.0 * kPi * std::sin(2.0 * kPi * x[0]) * std::sin(2.0 * kPi * x[1]) * t};
}

Vec2 ManufacturedSolution::forcing(double t, const Vec2& x, double mu) {
  const Vec2 ustar = velocity(0.0, x);
  return velocity_time_derivative(t, x) + velocity_gradient(t, x) * ustar -
         2.0 * mu * velocity_laplacian(t, x) + pressure_gradient(t, x);
}

AnalyticField rotation_field(double omega) {
  return {[omega](double, const Vec2& x) { return Vec2(-omega * (x[1] - 0.5), omega * (x[0] - 0.5)); },
          [omega](double, const Vec2&) {
            Mat2 g;
            g << 0.0, -omega, omega, 0.0;
            return g;
          }};
}

FlowProblem make_problem(const std::string& name, double mu) {
  FlowProblem p;
  p.name = name;
  p.forcing = zero_vector;
  p.boundary = zero_vector;
  if (name == "zero") {
    p.ustar = AnalyticField::zero();
    p.initial = [](const Vec2&) { return Vec2::Zero().eval(); };
    p.exact_velocity = zero_vector;
    p.exact_pressure = [](double, const Vec2&) { return 0.0; };
  } else if (name == "decay" || name == "forced") {
    p.ustar = rotation_field();
    p.initial = [](const Vec2& x) { return ManufacturedSolution::velocity(0.0, x); };
    if (name == "forced") {
      p.forcing = [](double t, const Vec2& x) -> Vec2 {
        return Vec2(std::sin(kPi * x[1]), x[0] * (1.0 - x[0])) * (1.0 + t);
      };
    }
  } else if (name == "uniform") {
    const Vec2 u(1.0, 0.5);
    p.ustar = rotation_field();
    p.initial = [u](const Vec2&) { return u; };
    p.boundary = [u](double, const Vec2&) { return u; };
    p.exact_velocity = p.boundary;
    p.exact_pressure = [](double, const Vec2&) { return 0.0; };
    p.homogeneous_boundary = false;
  } else if (name == "manufactured") {
    p.ustar = {[](double, const Vec2& x) { return ManufacturedSolution::velocity(0.0, x); },
               [](double, const Vec2& x) { return ManufacturedSolution::velocity_gradient(0.0, x); }};
    p.forcing = [mu](double t, const Vec2& x) { return ManufacturedSolution::forcing(t, x, mu); };
    p.boundary = ManufacturedSolution::velocity;
    p.initial = [](const Vec2& x) { return ManufacturedSolution::velocity(0.0, x); };
    p.exact_velocity = ManufacturedSolution::velocity;
    p.exact_pressure = ManufacturedSolution::pressure;
    p.homogeneous_boundary = false;
  } else {
    throw ConfigError("unknown problem '" + name + "'");
  }
  return p;
}

std::vector<std::string> problem_registry_names() {
  return {"zero", "decay", "forced", "uniform", "manufactured"};
}

}  // namespace oseen_ale
