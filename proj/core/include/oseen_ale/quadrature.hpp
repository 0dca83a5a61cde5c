#pragma once

#include <string>
#include <vector>

#include "oseen_ale/mesh.hpp"

namespace oseen_ale {

/// Quadrature on the reference triangle {(0,0), (1,0), (0,1)}.
/// Points are stored as reference coordinates (xi1, xi2), i.e. the
/// barycentric coordinates lambda_1 and lambda_2; lambda_0 = 1 - xi1 - xi2.
/// Weights sum to the reference area 1/2.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int order = 0;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(points.size()); }
};

/// Smallest built-in rule integrating polynomials of total degree `order`
/// exactly: centroid (1), 3-point (2), Dunavant 6-point (3-4), 7-point (5),
/// collapsed Gauss-Legendre beyond.
[[nodiscard]] QuadratureRule triangle_rule(int order);

/// Conical-product Gauss rule with n x n points, exact to degree 2n-2 on the triangle.
[[nodiscard]] QuadratureRule collapsed_gauss_rule(int n);

/// Gauss-Legendre nodes and weights on [0, 1] (weights sum to 1).
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
[[nodiscard]] LineRule gauss_legendre(int n);

/// Rule on the unit time interval [0,1]; nodes are fractions of the step and
/// the weights sum to one.
struct TimeQuadrature {
  std::string name;
  std::vector<double> nodes;
  std::vector<double> weights;

  static TimeQuadrature midpoint();
  static TimeQuadrature left_endpoint();
  static TimeQuadrature right_endpoint();
  static TimeQuadrature gauss(int n);
  /// "midpoint", "left", "right", "gauss5" (any "gaussN").
  static TimeQuadrature from_name(const std::string& name);
};

}  // namespace oseen_ale
