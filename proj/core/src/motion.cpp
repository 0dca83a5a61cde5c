#include "oseen_ale/motion.hpp"

#include <cmath>
#include <numbers>

#include "oseen_ale/errors.hpp"

namespace oseen_ale {

MotionProgram stationary_motion() {
  return {"stationary", [](double, const Vec2& y) { return y; },
          [](double, const Vec2&) { return Vec2::Zero().eval(); }, true};
}

MotionProgram translation_motion(double vx, double vy) {
  const Vec2 v(vx, vy);
  return {"translation", [v](double t, const Vec2& y) { return (y + t * v).eval(); },
          [v](double, const Vec2&) { return v; }, true};
}

MotionProgram expansion_motion(double alpha) {
  return {"expansion", [alpha](double t, const Vec2& y) { return ((1.0 + alpha * t) * y).eval(); },
          [alpha](double, const Vec2& y) { return (alpha * y).eval(); }, true};
}

MotionProgram shear_motion(double gamma) {
  return {"shear",
          [gamma](double t, const Vec2& y) { return Vec2(y.x() + gamma * t * y.y(), y.y()); },
          [gamma](double, const Vec2& y) { return Vec2(gamma * y.y(), 0.0); }, true};
}

MotionProgram smooth_expansion_motion(double amplitude) {
  using std::numbers::pi;
  return {"smooth-expansion",
          [amplitude](double t, const Vec2& y) {
            return ((1.0 + amplitude * t * std::sin(pi * y.x())) * y).eval();
          },
          [amplitude](double, const Vec2& y) {
            return (amplitude * std::sin(pi * y.x()) * y).eval();
          },
          false};
}

MotionProgram quadratic_expansion_motion(double beta) {
  return {"quadratic-expansion",
          [beta](double t, const Vec2& y) { return ((1.0 + beta * t * t) * y).eval(); },
          [beta](double t, const Vec2& y) { return (2.0 * beta * t * y).eval(); }, false};
}

namespace {

double param(const std::vector<double>& p, std::size_t i, double fallback) {
  return i < p.size() ? p[i] : fallback;
}

}  // namespace

MotionProgram make_motion(const std::string& name, const std::vector<double>& params) {
  if (name == "stationary") return stationary_motion();
  if (name == "translation") return translation_motion(param(params, 0, 1.0), param(params, 1, 0.0));
  if (name == "expansion") return expansion_motion(param(params, 0, 0.1));
  if (name == "shear") return shear_motion(param(params, 0, 0.5));
  if (name == "smooth-expansion") return smooth_expansion_motion(param(params, 0, 0.1));
  if (name == "quadratic-expansion") return quadratic_expansion_motion(param(params, 0, 1.0));
  throw ConfigError("unknown motion '" + name + "'");
}

std::vector<std::string> motion_registry_names() {
  return {"stationary",  // no parameters
          "translation",  // vx=1, vy=0
          "expansion",  // alpha=0.1
          "shear",  // gamma=0.5
          "smooth-expansion",  // amplitude=0.1
          "quadratic-expansion"};  // beta=1
}

}  // namespace oseen_ale
