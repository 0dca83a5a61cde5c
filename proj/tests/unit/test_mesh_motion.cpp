#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oseen_ale/ale_map.hpp"
#include "oseen_ale/errors.hpp"
#include "oseen_ale/mesh.hpp"
#include "oseen_ale/motion.hpp"
#include "oseen_ale/problems.hpp"
#include "support.hpp"

namespace oseen_ale {
namespace {

using testing::square;

TEST(ReferenceMesh, UnitSquareIsWellFormed) {
  const ReferenceMesh mesh = make_unit_square(5, 3);
  EXPECT_EQ(mesh.num_cells(), 30);
  EXPECT_EQ(mesh.num_nodes(), 24);
  double area = 0.0;
  for (int k = 0; k < mesh.num_cells(); ++k) {
    EXPECT_GT(mesh.signed_area(k), 0.0);
    area += mesh.signed_area(k);
    for (int v : mesh.cells()[k]) {
      EXPECT_GE(v, 0);
      EXPECT_LT(v, mesh.num_nodes());
    }
  }
  EXPECT_NEAR(area, 1.0, 1e-14);

  int boundary_edges = 0;
  for (const Edge& e : mesh.edges()) {
    EXPECT_TRUE(e.num_cells == 1 || e.num_cells == 2);
    if (e.num_cells == 1) {
      ++boundary_edges;
      EXPECT_TRUE(mesh.is_boundary_node(e.a));
      EXPECT_TRUE(mesh.is_boundary_node(e.b));
    }
  }
  EXPECT_EQ(boundary_edges, 2 * (5 + 3));
}

TEST(ReferenceMesh, RejectsClockwiseCell) {
  std::vector<Vec2> nodes = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  std::vector<std::uint8_t> markers = {kBottom | kLeft, kBottom | kRight, kTop | kLeft};
  EXPECT_THROW(ReferenceMesh(nodes, {{0, 2, 1}}, markers), InvertedCell);
}

TEST(ReferenceMesh, RejectsOutOfRangeNode) {
  std::vector<Vec2> nodes = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  std::vector<std::uint8_t> markers = {kBottom | kLeft, kBottom | kRight, kTop | kLeft};
  EXPECT_THROW(ReferenceMesh(nodes, {{0, 1, 3}}, markers), IndexOutOfRange);
}

TEST(MotionProgram, StartsAtIdentity) {
  const ReferenceMesh mesh = make_unit_square(3, 3);
  for (const auto& name : motion_registry_names()) {
    const MotionProgram m = make_motion(name);
    for (const Vec2& y : mesh.nodes()) EXPECT_LT((m.displacement(0.0, y) - y).norm(), 1e-15) << name;
  }
}

TEST(MotionProgram, UnknownNameIsConfigError) { EXPECT_THROW(make_motion("wobble"), ConfigError); }

TEST(DiscreteAleMap, IdentityMotionKeepsReferenceNodes) {
  const auto mesh = square(3);
  const auto map = DiscreteAleMap::build(mesh, stationary_motion(), {0.0, 0.3, 4});
  for (double tau : {0.0, 0.1, 0.45, 1.2}) {
    const auto pos = map.positions_at(tau);
    for (int v = 0; v < mesh->num_nodes(); ++v) EXPECT_EQ(pos[v], mesh->nodes()[v]);
  }
}

TEST(DiscreteAleMap, LinearExpansionMidpointIsExact) {
  const auto mesh = square(2);
  const auto map = DiscreteAleMap::build(mesh, expansion_motion(0.1), {0.0, 1.0, 1});
  const auto pos = map.positions_at(0.5);
  for (int v = 0; v < mesh->num_nodes(); ++v) {
    EXPECT_LT((pos[v] - 1.05 * mesh->nodes()[v]).norm(), 1e-15);
  }
}

TEST(DiscreteAleMap, QuadraticMotionInterpolationResidual) {
  const auto mesh = square(2);
  const MotionProgram motion = quadratic_expansion_motion(1.0);
  const auto map = DiscreteAleMap::build(mesh, motion, {0.0, 1.0, 1});
  const auto pos = map.positions_at(0.5);
  for (int v = 0; v < mesh->num_nodes(); ++v) {
    const Vec2& y = mesh->nodes()[v];
    EXPECT_LT((pos[v] - 1.5 * y).norm(), 1e-15);
    EXPECT_NEAR((pos[v] - motion.displacement(0.5, y)).norm(), 0.25 * y.norm(), 1e-15);
  }
}

TEST(DiscreteAleMap, InterpolationExactForMotionsLinearInTime) {
  const auto mesh = square(4);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tau(0.0, 1.0);
  for (const auto& name : {"translation", "expansion", "shear", "smooth-expansion"}) {
    const MotionProgram motion = make_motion(name);
    const auto map = DiscreteAleMap::build(mesh, motion, {0.0, 0.125, 8});
    for (int s = 0; s < 20; ++s) {
      const double t = tau(rng);
      const auto pos = map.positions_at(t);
      for (int v = 0; v < mesh->num_nodes(); ++v) {
        EXPECT_LT((pos[v] - motion.displacement(t, mesh->nodes()[v])).norm(), 1e-14) << name;
      }
    }
  }
}

TEST(DiscreteAleMap, MidpointPositionsAreTheMean) {
  const auto mesh = square(4);
  const auto map = DiscreteAleMap::build(mesh, quadratic_expansion_motion(0.7), {0.0, 0.2, 5});
  for (int n = 0; n < 5; ++n) {
    const auto mid = map.positions_at(0.2 * n + 0.1);
    const auto p0 = map.positions(n);
    const auto p1 = map.positions(n + 1);
    for (int v = 0; v < mesh->num_nodes(); ++v) EXPECT_LT((mid[v] - 0.5 * (p0[v] + p1[v])).norm(), 1e-15);
  }
}

TEST(DiscreteAleMap, FirstPositionsAreReferenceNodes) {
  const auto mesh = square(3);
  const auto map = DiscreteAleMap::build(mesh, make_motion("smooth-expansion"), {0.0, 0.1, 3});
  const auto p0 = map.positions(0);
  for (int v = 0; v < mesh->num_nodes(); ++v) EXPECT_EQ(p0[v], mesh->nodes()[v]);
}

TEST(DiscreteAleMap, RejectsFoldingMotion) {
  // x = (1 - 2t) Y collapses the domain at t = 1/2.
  const MotionProgram fold{"fold", [](double t, const Vec2& y) { return ((1.0 - 2.0 * t) * y).eval(); },
                           [](double, const Vec2& y) { return (-2.0 * y).eval(); }, true};
  EXPECT_THROW((void)DiscreteAleMap::build(square(2), fold, {0.0, 0.25, 4}), InvertedCell);
}

TEST(DiscreteAleMap, OutOfRangeQueriesThrow) {
  const auto map = DiscreteAleMap::build(square(2), stationary_motion(), {0.0, 0.5, 2});
  EXPECT_THROW((void)map.mesh_velocity(2), IndexOutOfRange);
  EXPECT_THROW((void)map.mesh_velocity(-1), IndexOutOfRange);
  EXPECT_THROW((void)map.positions(3), IndexOutOfRange);
  EXPECT_THROW((void)map.positions_at(1.5), IndexOutOfRange);
}

TEST(MeshVelocity, StationaryIsZero) {
  const auto map = DiscreteAleMap::build(square(3), stationary_motion(), {0.0, 0.1, 3});
  for (int n = 0; n < 3; ++n) {
    for (const Vec2& w : map.mesh_velocity(n).nodal_values) EXPECT_EQ(w.norm(), 0.0);
  }
}

TEST(MeshVelocity, TranslationIsUniform) {
  const auto map = DiscreteAleMap::build(square(3), translation_motion(1.0, 0.0), {0.0, 0.25, 4});
  for (int n = 0; n < 4; ++n) {
    for (const Vec2& w : map.mesh_velocity(n).nodal_values) EXPECT_LT((w - Vec2(1.0, 0.0)).norm(), 1e-14);
  }
}

TEST(MeshVelocity, ExpansionVelocity) {
  const auto mesh = square(3);
  const auto map = DiscreteAleMap::build(mesh, expansion_motion(0.1), {0.0, 0.5, 2});
  const auto w = map.mesh_velocity(0);
  for (int v = 0; v < mesh->num_nodes(); ++v) {
    EXPECT_LT((w.nodal_values[v] - 0.1 * mesh->nodes()[v]).norm(), 1e-15);
  }
}

TEST(MeshVelocity, EqualsDifferenceQuotient) {
  const auto mesh = square(3);
  const auto map = DiscreteAleMap::build(mesh, make_motion("quadratic-expansion"), {0.0, 0.2, 5});
  for (int n = 0; n < 5; ++n) {
    const auto w = map.mesh_velocity(n);
    for (int v = 0; v < mesh->num_nodes(); ++v) {
      const Vec2 dq = (map.positions(n + 1)[v] - map.positions(n)[v]) / 0.2;
      EXPECT_LT((w.nodal_values[v] - dq).norm(), 1e-14);
    }
  }
}

TEST(MeshVelocity, ConvergesAtFirstOrderForNonlinearMotion) {
  const auto mesh = square(3);
  const MotionProgram motion = quadratic_expansion_motion(1.0);
  auto sup_error = [&](int steps) {
    const double dt = 1.0 / steps;
    const auto map = DiscreteAleMap::build(mesh, motion, {0.0, dt, steps});
    double err = 0.0;
    for (int n = 0; n < steps; ++n) {
      const auto w = map.mesh_velocity(n);
      for (int v = 0; v < mesh->num_nodes(); ++v) {
        const Vec2 exact = motion.displacement_time_derivative(n * dt, mesh->nodes()[v]);
        err = std::max(err, (w.nodal_values[v] - exact).norm());
      }
    }
    return err;
  };
  double previous = sup_error(4);
  for (int steps : {8, 16, 32}) {
    const double e = sup_error(steps);
    EXPECT_NEAR(std::log2(previous / e), 1.0, 0.05);
    previous = e;
  }
}

TEST(JacobianDeterminant, IdentityIsOne) {
  const auto map = DiscreteAleMap::build(square(3), stationary_motion(), {0.0, 0.5, 2});
  for (int k = 0; k < map.mesh().num_cells(); ++k) {
    for (double tau : {0.0, 0.3, 1.0}) EXPECT_DOUBLE_EQ(map.jacobian_determinant(tau, k), 1.0);
  }
}

TEST(JacobianDeterminant, IsotropicScaling) {
  const auto map = DiscreteAleMap::build(square(3), expansion_motion(0.1), {0.0, 0.5, 2});
  for (int k = 0; k < map.mesh().num_cells(); ++k) EXPECT_NEAR(map.jacobian_determinant(1.0, k), 1.21, 1e-14);
}

TEST(JacobianDeterminant, ShearPreservesArea) {
  const auto map = DiscreteAleMap::build(square(3), shear_motion(1.0), {0.0, 0.25, 4});
  for (int k = 0; k < map.mesh().num_cells(); ++k) {
    for (double tau : {0.0, 0.1, 0.6, 1.0}) EXPECT_NEAR(map.jacobian_determinant(tau, k), 1.0, 1e-13);
  }
}

TEST(JacobianDeterminant, QuadraticInTimeWithinAnInterval) {
  const auto mesh = square(4);
  const auto map = DiscreteAleMap::build(mesh, make_motion("smooth-expansion", {0.3}), {0.0, 0.5, 2});
  const std::array<double, 4> taus = {0.5, 0.6, 0.8, 1.0};
  for (int k = 0; k < mesh->num_cells(); ++k) {
    Eigen::Matrix<double, 4, 3> v;
    Eigen::Vector4d d;
    for (int i = 0; i < 4; ++i) {
      v(i, 0) = 1.0;
      v(i, 1) = taus[i];
      v(i, 2) = taus[i] * taus[i];
      d[i] = map.jacobian_determinant(taus[i], k);
    }
    const Eigen::Vector3d coeffs = v.colPivHouseholderQr().solve(d);
    EXPECT_LT((v * coeffs - d).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(GclResidual, StationaryIsExactlyZero) {
  const auto mesh = square(3);
  const auto map = DiscreteAleMap::build(mesh, stationary_motion(), {0.0, 0.1, 3});
  for (const auto& [i, j] : sample_basis_pairs(*mesh, 30, 1)) {
    const GclBalance b = gcl_balance(map, 1, i, j, TimeQuadrature::left_endpoint());
    EXPECT_EQ(b.mass_change, 0.0);
    EXPECT_EQ(b.flux_integral, 0.0);
    EXPECT_EQ(gcl_residual(map, 1, i, j, TimeQuadrature::left_endpoint()), 0.0);
  }
}

TEST(GclResidual, MidpointIsExactForEveryMotion) {
  const auto mesh = square(4);
  const auto pairs = sample_basis_pairs(*mesh, 50, 3);
  for (const auto& name : motion_registry_names()) {
    const auto map = DiscreteAleMap::build(mesh, make_motion(name), {0.0, 0.1, 10});
    EXPECT_LE(max_gcl_residual(map, pairs, TimeQuadrature::midpoint()), 1e-12) << name;
    // The 5-point Gauss rule is exact for the quadratic-in-time integrand, so it is an oracle.
    for (int n = 0; n < 10; n += 3) {
      for (const auto& [i, j] : pairs) {
        const GclBalance mid = gcl_balance(map, n, i, j, TimeQuadrature::midpoint());
        const GclBalance oracle = gcl_balance(map, n, i, j, TimeQuadrature::gauss(5));
        EXPECT_NEAR(mid.flux_integral, oracle.flux_integral, 1e-15 + 1e-12 * oracle.mass_scale) << name;
      }
    }
  }
}

TEST(GclResidual, LeftEndpointDefectOnExpansion) {
  // With x = (1 + a t) Y, M(t) = (1 + a t)^2 M_ref and the flux integrand is 2a(1 + a t) M_ref,
  // so the left rule misses a^2 dt^2 M_ref.
  const double a = 0.5;
  const double dt = 0.1;
  const auto mesh = square(4);
  const auto map = DiscreteAleMap::build(mesh, expansion_motion(a), {0.0, dt, 10});
  for (const auto& [i, j] : sample_basis_pairs(*mesh, 20, 5)) {
    for (int n : {0, 4, 9}) {
      const double t1 = (n + 1) * dt;
      const GclBalance b = gcl_balance(map, n, i, j, TimeQuadrature::left_endpoint());
      // P2 mass entries can be negative, so recover the signed reference entry.
      const double mref = b.mass_change / (std::pow(1.0 + a * t1, 2) - std::pow(1.0 + a * n * dt, 2));
      EXPECT_NEAR(b.defect(), a * a * dt * dt * mref, 1e-14);
      EXPECT_NEAR(gcl_residual(map, n, i, j, TimeQuadrature::left_endpoint()),
                  a * a * dt * dt / std::pow(1.0 + a * t1, 2), 1e-12);
      const GclBalance oracle = gcl_balance(map, n, i, j, TimeQuadrature::gauss(5));
      EXPECT_NEAR(b.defect(), oracle.flux_integral - b.flux_integral, 1e-14);
    }
  }
}

TEST(GclResidual, SampledPairsShareACell) {
  const auto mesh = square(3);
  const FunctionSpace p2(mesh, SpaceKind::Velocity);
  std::set<std::pair<int, int>> coupled;
  for (int k = 0; k < mesh->num_cells(); ++k) {
    const auto dofs = p2.cell_scalar_dofs(k);
    for (int a : dofs) {
      for (int b : dofs) coupled.emplace(a, b);
    }
  }
  const auto pairs = sample_basis_pairs(*mesh, 100, 11);
  EXPECT_EQ(pairs.size(), 100u);
  for (const auto& p : pairs) EXPECT_TRUE(coupled.count(p));
  EXPECT_EQ(pairs, sample_basis_pairs(*mesh, 100, 11));
}

TEST(TransportResidual, StationaryIsZero) {
  const auto map = DiscreteAleMap::build(square(3), stationary_motion(), {0.0, 0.1, 2});
  const auto phi = [](const Vec2& y) { return std::sin(3.0 * y.x()) + y.y(); };
  EXPECT_EQ(transport_residual(map, phi, 0), 0.0);
}

TEST(TransportResidual, UnitDensityOnExpansion) {
  const double a = 0.3;
  const double dt = 0.25;
  const auto map = DiscreteAleMap::build(square(3), expansion_motion(a), {0.0, dt, 4});
  const auto one = [](const Vec2&) { return 1.0; };
  for (int n = 0; n < 4; ++n) {
    const TransportBalance b = transport_balance(map, one, n, TransportVelocity::EndpointExact);
    const double area_rate = (std::pow(1.0 + a * (n + 1) * dt, 2) - std::pow(1.0 + a * n * dt, 2)) / dt;
    EXPECT_NEAR(b.rate, area_rate, 1e-13);
    EXPECT_NEAR(b.flux, area_rate, 1e-13);
    EXPECT_LE(b.relative(), 1e-10);
  }
}

TEST(TransportResidual, TranslationHasNoMeasureChange) {
  const auto map = DiscreteAleMap::build(square(3), translation_motion(1.0, -0.5), {0.0, 0.2, 3});
  const auto phi = [](const Vec2& y) { return y.x(); };
  for (int n = 0; n < 3; ++n) {
    const TransportBalance b = transport_balance(map, phi, n, TransportVelocity::EndpointExact);
    EXPECT_NEAR(b.rate, 0.0, 1e-14);
    EXPECT_NEAR(b.flux, 0.0, 1e-14);
  }
}

TEST(TransportResidual, DiscreteVelocityHoldsForEveryMotion) {
  const auto phi = [](const Vec2& y) { return 1.0 + y.x() * y.y() + std::cos(y.x()); };
  for (const auto& name : motion_registry_names()) {
    const auto map = DiscreteAleMap::build(square(4), make_motion(name), {0.0, 0.2, 5});
    for (int n = 0; n < 5; ++n) {
      EXPECT_LE(transport_residual(map, phi, n, TransportVelocity::Discrete), 1e-12) << name;
    }
  }
}

TEST(MappingNorms, TranslationHasNoDeformation) {
  const auto map = DiscreteAleMap::build(square(3), translation_motion(1.0, 0.5), {0.0, 0.25, 4});
  const MappingNorms m = mapping_norms(map, rotation_field(), 2);
  EXPECT_LT(m.sup_grad_w_hat, 1e-13);
  EXPECT_LT(m.sup_div_w, 1e-13);
  EXPECT_LT(m.sup_div_ustar, 1e-14);
  EXPECT_NEAR(m.sup_grad_map, 1.0, 1e-14);
}

TEST(MappingNorms, Expansion) {
  const double a = 0.1;
  const auto map = DiscreteAleMap::build(square(3), expansion_motion(a), {0.0, 0.5, 2});
  const MappingNorms m = mapping_norms(map, AnalyticField::zero(), 1);
  EXPECT_NEAR(m.sup_grad_w_hat, a, 1e-13);
  EXPECT_NEAR(m.sup_grad_map, 1.1, 1e-13);
  EXPECT_NEAR(m.sup_div_w, 2.0 * a / 1.1, 1e-13);
  EXPECT_EQ(m.sup_div_ustar, 0.0);
}

TEST(MappingNorms, MaxRowSumConvention) {
  Mat2 m;
  m << 1.0, -2.0, 0.5, 0.25;
  EXPECT_DOUBLE_EQ(max_row_sum(m), 3.0);
}

}  // namespace
}  // namespace oseen_ale
