#include "oseen_ale/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "oseen_ale/errors.hpp"

namespace oseen_ale {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double weight) {
  // Points (a, a), (1-2a, a), (a, 1-2a) in barycentric form.
  const double b = 1.0 - 2.0 * a;
  rule.points.emplace_back(a, a);
  rule.points.emplace_back(b, a);
  rule.points.emplace_back(a, b);
  for (int i = 0; i < 3; ++i) rule.weights.push_back(0.5 * weight);
}

}  // namespace

LineRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre needs n >= 1");
  // Evaluates P_n(x) and P_{n-1}(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, p0};
  };
  LineRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre(x);
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(x);
    dp = n * (x * pn - pm) / (x * x - 1.0);
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadratureRule collapsed_gauss_rule(int n) {
  const LineRule line = gauss_legendre(n);
  QuadratureRule rule;
  rule.order = 2 * n - 2;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = line.nodes[i];
      const double v = line.nodes[j];
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(line.weights[i] * line.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

QuadratureRule triangle_rule(int order) {
  QuadratureRule rule;
  if (order <= 1) {
    rule.order = 1;
    rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
    rule.weights.push_back(0.5);
  } else if (order == 2) {
    rule.order = 2;
    add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
  } else if (order <= 4) {
    // Dunavant degree-4 rule in closed form.
    rule.order = 4;
    const double s10 = std::sqrt(10.0);
    const double r = std::sqrt(38.0 - 44.0 * std::sqrt(2.0 / 5.0));
    const double q = std::sqrt(213125.0 - 53320.0 * s10);
    add_orbit3(rule, (8.0 - s10 + r) / 18.0, (620.0 + q) / 3720.0);
    add_orbit3(rule, (8.0 - s10 - r) / 18.0, (620.0 - q) / 3720.0);
  } else if (order == 5) {
    rule.order = 5;
    const double s15 = std::sqrt(15.0);
    rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
    rule.weights.push_back(0.5 * 9.0 / 40.0);
    add_orbit3(rule, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
    add_orbit3(rule, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
  } else {
    rule = collapsed_gauss_rule((order + 3) / 2);
    rule.order = order;
  }
  return rule;
}

TimeQuadrature TimeQuadrature::midpoint() { return {"midpoint", {0.5}, {1.0}}; }

TimeQuadrature TimeQuadrature::left_endpoint() { return {"left", {0.0}, {1.0}}; }

TimeQuadrature TimeQuadrature::right_endpoint() { return {"right", {1.0}, {1.0}}; }

TimeQuadrature TimeQuadrature::gauss(int n) {
  LineRule line = gauss_legendre(n);
  return {"gauss" + std::to_string(n), std::move(line.nodes), std::move(line.weights)};
}

TimeQuadrature TimeQuadrature::from_name(const std::string& name) {
  if (name == "midpoint") return midpoint();
  if (name == "left" || name == "left-endpoint") return left_endpoint();
  if (name == "right" || name == "right-endpoint") return right_endpoint();
  if (name.rfind("gauss", 0) == 0 && name.size() > 5) {
    const int n = std::stoi(name.substr(5));
    if (n >= 1) return gauss(n);
  }
  throw ConfigError("unknown time quadrature '" + name + "'");
}

}  // namespace oseen_ale
