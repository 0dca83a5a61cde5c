#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oseen_ale/analysis.hpp"
#include "oseen_ale/errors.hpp"
#include "oseen_ale/io.hpp"
#include "oseen_ale/motion.hpp"
#include "oseen_ale/problems.hpp"
#include "support.hpp"

namespace oseen_ale {
namespace {

using testing::square;

SchemeConfig scheme(SchemeVariant v, double dt, int steps, double mu = 0.01, double mu_T = 0.01) {
  SchemeConfig c;
  c.variant = v;
  c.dt = dt;
  c.n_steps = steps;
  c.mu = mu;
  c.mu_T = mu_T;
  return c;
}

TEST(Gronwall, NoGrowthGivesTheLoadSum) {
  const std::vector<double> g(4, 0.0), b(4, 0.3), c{1.0, 2.0, 0.5, 0.25};
  const GronwallEnvelope e = gronwall_envelope(0.1, g, b, c, 0.7);
  ASSERT_TRUE(e.valid);
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    sum += c[i];
    EXPECT_EQ(e.bound[i], 0.1 * sum + 0.7);
  }
}

TEST(Gronwall, HandEvaluatedExample) {
  // sigma = 1/0.9 on both indices: exponent 0.1 * 2 / 0.9.
  const GronwallEnvelope e = gronwall_envelope(0.1, {1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, 2.0);
  ASSERT_TRUE(e.valid);
  EXPECT_NEAR(e.bound[1], 2.0 * std::exp(2.0 / 9.0), 1e-15);
  EXPECT_NEAR(e.bound[1], 2.4977, 5e-5);
  EXPECT_NEAR(e.bound[0], 2.0 * std::exp(1.0 / 9.0), 1e-15);
}

TEST(Gronwall, InapplicableInputsClearTheFlag) {
  EXPECT_FALSE(gronwall_envelope(0.5, {1.0, 2.0}, {}, {0.0, 0.0}, 1.0).valid);
  EXPECT_TRUE(std::isinf(gronwall_envelope(0.5, {1.0, 2.0}, {}, {0.0, 0.0}, 1.0).bound[1]));
  EXPECT_FALSE(gronwall_envelope(0.1, {1.0}, {}, {-1.0}, 1.0).valid);
  EXPECT_FALSE(gronwall_envelope(0.1, {1.0}, {}, {0.0}, -1.0).valid);
  EXPECT_THROW((void)gronwall_envelope(0.1, {1.0, 1.0}, {}, {0.0}, 1.0), InvalidArgument);
}

TEST(Gronwall, ConclusionHoldsOnRandomHypothesisInstances) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(u(rng) * 30);
    const double dt = 0.01 + 0.2 * u(rng);
    std::vector<double> g(n), b(n), c(n), a(n);
    for (int i = 0; i < n; ++i) {
      g[i] = 0.99 * u(rng) / dt;
      c[i] = 3.0 * u(rng);
    }
    const double f = 2.0 * u(rng);
    // Build A forward so that the hypothesis holds, some steps with equality.
    double bsum = 0.0, gsum = 0.0, csum = 0.0;
    for (int i = 0; i < n; ++i) {
      csum += c[i];
      const double room = dt * gsum + dt * csum + f - dt * bsum;
      b[i] = u(rng) * room / dt;
      bsum += b[i];
      const double amax = (room - dt * b[i]) / (1.0 - dt * g[i]);
      a[i] = (u(rng) < 0.3 ? 1.0 : u(rng)) * amax;
      gsum += g[i] * a[i];
    }
    ASSERT_TRUE(gronwall_hypothesis_holds(dt, a, b, g, c, f, 1e-12));
    const GronwallEnvelope e = gronwall_envelope(dt, g, b, c, f);
    ASSERT_TRUE(e.valid);
    bsum = 0.0;
    for (int i = 0; i < n; ++i) {
      bsum += b[i];
      EXPECT_LE(a[i] + dt * bsum, e.bound[i] * (1.0 + 1e-12)) << "trial " << trial << " step " << i;
    }
  }
}

TEST(Ledger, NonnegativeAndCumulative) {
  const Trajectory t = run_simulation(scheme(SchemeVariant::GclMidpoint, 0.05, 8), square(4),
                                      make_motion("expansion"), make_problem("forced", 0.01));
  const EnergyLedger l = build_ledger(t);
  ASSERT_EQ(l.rows.size(), 9u);
  EXPECT_EQ(l.dt, 0.05);
  for (std::size_t i = 0; i < l.rows.size(); ++i) {
    const LedgerRow& r = l.rows[i];
    for (double v : {r.kinetic, r.viscous, r.fine, r.load, r.cum_viscous, r.cum_fine, r.cum_load, r.cum_load_norm}) {
      EXPECT_GE(v, 0.0);
    }
    if (i > 0) {
      const LedgerRow& p = l.rows[i - 1];
      EXPECT_GE(r.cum_viscous, p.cum_viscous);
      EXPECT_GE(r.cum_fine, p.cum_fine);
      EXPECT_GE(r.cum_load, p.cum_load);
      EXPECT_NEAR(r.cum_load_norm - p.cum_load_norm, std::sqrt(r.load), 1e-14);
    }
  }
  EXPECT_GT(l.rows.back().cum_load, 0.0);
}

TEST(GclCertificate, ZeroDataIsTight) {
  const Trajectory t = run_simulation(scheme(SchemeVariant::GclMidpoint, 0.1, 5), square(3),
                                      make_motion("shear"), make_problem("zero", 0.01));
  const StabilityCertificate c = certify_gcl_stability(t, 0.01, 0.01, 1.0);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_EQ(c.rhs, 0.0);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.estimate, "gcl");
}

TEST(GclCertificate, HoldsOnRandomMotionSweepWithoutForcing) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::string> motions{"translation", "expansion", "shear", "smooth-expansion"};
  for (int k = 0; k < 20; ++k) {
    const std::string name = motions[k % motions.size()];
    const std::vector<double> params =
        name == "translation" ? std::vector<double>{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0}
                              : std::vector<double>{u(rng)};
    const double mu = k % 2 == 0 ? 0.01 : 0.1;
    const double mu_T = 0.02 * u(rng);
    const Trajectory t = run_simulation(scheme(SchemeVariant::GclMidpoint, 0.1, 5, mu, mu_T), square(3),
                                        make_motion(name, params), make_problem("decay", mu));
    const StabilityCertificate c = certify_gcl_stability(t, mu, mu_T, 1.0);
    EXPECT_TRUE(c.holds) << name << " slack " << c.slack;
    EXPECT_GE(c.slack, 0.0);
  }
}

TEST(GclCertificate, HoldsFlagMatchesTheSlackRule) {
  EXPECT_TRUE(certificate_holds(1.0, 1.0));
  EXPECT_TRUE(certificate_holds(1.0 + 5e-11, 1.0));
  EXPECT_FALSE(certificate_holds(1.0 + 2e-10, 1.0));
  EXPECT_TRUE(certificate_holds(100.0 + 5e-9, 100.0));
  EXPECT_FALSE(certificate_holds(100.0 + 2e-8, 100.0));
}

TEST(Certificates, RejectTheWrongVariant) {
  const auto mesh = square(2);
  const Trajectory g = run_simulation(scheme(SchemeVariant::GclMidpoint, 0.1, 2), mesh, stationary_motion(),
                                      make_problem("decay", 0.01));
  const Trajectory e = run_simulation(scheme(SchemeVariant::Endpoint, 0.1, 2), mesh, stationary_motion(),
                                      make_problem("decay", 0.01));
  EXPECT_THROW((void)certify_gcl_stability(e, 0.01, 0.01, 1.0), WrongVariant);
  EXPECT_THROW((void)certify_nogcl_stability(g, 0.01, 0.01, 1.0), WrongVariant);
}

TEST(NogclCertificate, InadmissibleStepIsRefused) {
  const Trajectory t = run_simulation(scheme(SchemeVariant::Endpoint, 1.0, 2), square(2), expansion_motion(5.0),
                                      make_problem("decay", 0.01));
  EXPECT_FALSE(dt_admissible(*t.map, t.ustar, 10.0).admissible);
  EXPECT_THROW((void)certify_nogcl_stability(t, 0.01, 0.01, 1.0, 10.0), ConditionViolated);
}

TEST(NogclCertificate, StationaryDomainWithoutForcingHoldsWithUnitConstant) {
  const Trajectory t = run_simulation(scheme(SchemeVariant::Endpoint, 0.05, 10), square(4), stationary_motion(),
                                      make_problem("decay", 0.01));
  const StabilityCertificate c = certify_nogcl_stability(t, 0.01, 0.01, 1.0);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.estimate, "no-gcl");
  EXPECT_EQ(c.constant, 1.0);
  EXPECT_LE(nogcl_ratio(t, 0.01, 0.01), 1.0 + 1e-10);
}

TEST(NogclCertificate, ZeroDataHolds) {
  const Trajectory t = run_simulation(scheme(SchemeVariant::Endpoint, 0.1, 3), square(2), expansion_motion(0.2),
                                      make_problem("zero", 0.01));
  EXPECT_TRUE(certify_nogcl_stability(t, 0.01, 0.0, 1.0).holds);
  EXPECT_EQ(nogcl_ratio(t, 0.01, 0.0), 0.0);
}

TEST(DtCondition, DivergenceFreeMotionsAreAlwaysAdmissible) {
  const auto mesh = square(3);
  for (const MotionProgram& m : {stationary_motion(), translation_motion(1.0, -0.5), shear_motion(0.8)}) {
    for (double dt : {0.1, 1.0, 10.0}) {
      const auto map = DiscreteAleMap::build(mesh, m, {0.0, dt, 2});
      const DtCondition d = dt_admissible(map, rotation_field(), 1.0);
      EXPECT_LE(std::abs(d.lhs), 1e-13 * dt * dt) << m.name;
      EXPECT_TRUE(d.admissible);
      EXPECT_EQ(d.bound, 0.5);
    }
  }
}

TEST(DtCondition, ExpansionByHandFromTheMappingNorms) {
  const auto mesh = square(3);
  const double dt = 0.5;
  const auto map = DiscreteAleMap::build(mesh, expansion_motion(0.1), {0.0, dt, 2});
  for (int n = 0; n < 2; ++n) {
    const MappingNorms m = mapping_norms(map, AnalyticField::zero(), n);
    const double hand = dt * dt * m.sup_grad_w_hat * m.sup_grad_map * m.sup_div_w;
    const DtCondition d = dt_admissible(m, dt, 1.0);
    EXPECT_EQ(d.lhs, hand);
    EXPECT_TRUE(d.admissible);
  }
  // |D A| = 1 + alpha t^{n+1} and div w = 2 alpha / (1 + alpha t^{n+1}) cancel, so every interval ties.
  const MappingNorms last = mapping_norms(map, AnalyticField::zero(), 1);
  EXPECT_NEAR(last.sup_grad_w_hat, 0.1, 1e-12);
  EXPECT_NEAR(last.sup_grad_map, 1.1, 1e-12);
  EXPECT_NEAR(last.sup_div_w, 0.2 / 1.1, 1e-12);
  const DtCondition worst = dt_admissible(map, AnalyticField::zero(), 1.0);
  EXPECT_NEAR(worst.lhs, dt * dt * 0.1 * 0.2, 1e-12);
  // Admissibility flips exactly at lhs = 1/2.
  MappingNorms m;
  m.sup_grad_w_hat = 1.0;
  m.sup_grad_map = 1.0;
  m.sup_div_w = 2.0;
  EXPECT_TRUE(dt_admissible(m, 0.5, 1.0).admissible);
  EXPECT_FALSE(dt_admissible(m, 0.5 + 1e-9, 1.0).admissible);
  m.sup_div_ustar = 1.0;
  EXPECT_NEAR(dt_admissible(m, 1.0, 1.0).lhs, 1.5, 1e-15);
}

TEST(TimeMoment, HandIntegrals) {
  EXPECT_DOUBLE_EQ(time_moment(2, 1.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(time_moment(0, 0.3), 0.3);
  EXPECT_DOUBLE_EQ(time_moment(1, 0.5), 0.125);
  EXPECT_THROW((void)time_moment(-1, 1.0), InvalidArgument);
}

ConvergenceStudy small_study(const std::string& problem, const std::string& motion, double end_time,
                             std::vector<double> dts) {
  ConvergenceStudy s;
  s.scheme.mu = 0.01;
  s.scheme.mu_T = 0.0;
  s.mesh = square(4);
  s.motion = make_motion(motion);
  s.problem = make_problem(problem, s.scheme.mu);
  s.end_time = end_time;
  s.dts = std::move(dts);
  return s;
}

TEST(Convergence, RejectsBadSequences) {
  EXPECT_THROW((void)temporal_convergence(small_study("manufactured", "stationary", 0.4, {0.1, 0.05})),
               InvalidArgument);
  EXPECT_THROW((void)temporal_convergence(small_study("manufactured", "stationary", 0.4, {0.1, 0.05, 0.02})),
               InvalidArgument);
  EXPECT_THROW((void)temporal_convergence(small_study("manufactured", "stationary", 0.33, {0.1, 0.05, 0.025})),
               InvalidArgument);
  EXPECT_EQ(parse_reference_kind(to_string(ReferenceKind::Plain)), ReferenceKind::Plain);
  EXPECT_THROW((void)parse_reference_kind("exact"), ConfigError);
}

TEST(Convergence, SteadyProblemSitsAtTheNoiseFloor) {
  ConvergenceStudy s = small_study("uniform", "stationary", 0.2, {0.1, 0.05, 0.025});
  s.reference = ReferenceKind::Plain;
  const ConvergenceTable t = temporal_convergence(s);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const ConvergenceRow& r : t.rows) {
    EXPECT_TRUE(r.below_floor);
    EXPECT_TRUE(std::isnan(r.rate));
  }
}

TEST(Convergence, FirstOrderWithAndWithoutFineScaleViscosity) {
  for (double mu_T : {0.0, 0.01}) {
    ConvergenceStudy s = small_study("manufactured", "smooth-expansion", 1.0, {0.1, 0.05, 0.025});
    s.scheme.mu_T = mu_T;
    const ConvergenceTable t = temporal_convergence(s);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_TRUE(std::isnan(t.rows[0].rate));
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      EXPECT_EQ(t.rows[i].dt, 0.5 * t.rows[i - 1].dt);
      EXPECT_FALSE(t.rows[i].below_floor);
    }
    EXPECT_GE(t.rows.back().rate, 0.85) << "mu_T " << mu_T;
    EXPECT_LE(t.rows.back().rate, 1.15) << "mu_T " << mu_T;
  }
}

TEST(Io, DoublesRoundTrip) {
  for (double v : {0.0, -1.5, 1.0 / 3.0, 6.02214076e23, 5e-324, std::nextafter(1.0, 2.0)}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_TRUE(std::isnan(parse_double(format_double(std::nan("")))));
  EXPECT_EQ(parse_double(format_double(-INFINITY)), -INFINITY);
  EXPECT_THROW((void)parse_double("1.0x"), InvalidArgument);
}

TEST(Io, LedgerCsvRoundTrip) {
  const Trajectory t = run_simulation(scheme(SchemeVariant::Endpoint, 0.1, 3), square(2), expansion_motion(0.3),
                                      make_problem("forced", 0.01));
  const EnergyLedger l = build_ledger(t);
  std::stringstream ss;
  write_ledger_csv(ss, l);
  const EnergyLedger back = read_ledger_csv(ss);
  EXPECT_EQ(back.variant, l.variant);
  EXPECT_EQ(back.dt, l.dt);
  ASSERT_EQ(back.rows.size(), l.rows.size());
  for (std::size_t i = 0; i < l.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].step, l.rows[i].step);
    EXPECT_EQ(back.rows[i].kinetic, l.rows[i].kinetic);
    EXPECT_EQ(back.rows[i].cum_load_norm, l.rows[i].cum_load_norm);
  }
}

TEST(Io, ConvergenceCsvRoundTrip) {
  ConvergenceTable t;
  t.rows.push_back({0.1, 1e-3, 2e-3, std::nan(""), std::nan(""), false});
  t.rows.push_back({0.05, 5e-4, 1e-3, 1.0, 1.0, false});
  t.rows.push_back({0.025, 1e-12, 1e-11, std::nan(""), std::nan(""), true});
  std::stringstream ss;
  write_convergence_csv(ss, t);
  const ConvergenceTable back = read_convergence_csv(ss);
  ASSERT_EQ(back.rows.size(), 3u);
  EXPECT_TRUE(std::isnan(back.rows[0].rate));
  EXPECT_EQ(back.rows[1].rate, 1.0);
  EXPECT_EQ(back.rows[2].error_l2, 1e-12);
  EXPECT_TRUE(back.rows[2].below_floor);
}

TEST(Io, SummaryJsonRoundTrip) {
  RunSummary s;
  s.problem = "forced";
  s.motion = "expansion";
  s.variant = SchemeVariant::Endpoint;
  s.mu = 0.01;
  s.mu_T = 0.02;
  s.dt = 0.05;
  s.n_steps = 20;
  s.final_kinetic = 1.0 / 7.0;
  StabilityCertificate c;
  c.estimate = "no-gcl";
  c.lhs = 0.3;
  c.rhs = 0.4;
  c.slack = 0.1;
  c.constant = 1.5;
  c.holds = true;
  c.worst_step = 3;
  s.certificate = c;
  DtCondition d;
  d.lhs = 0.01;
  d.norms.sup_div_w = 0.2;
  d.constant = 10.0;
  d.interval = 4;
  s.dt_condition = d;
  const RunSummary back = run_summary_from_json(to_json(s));
  EXPECT_EQ(back.problem, s.problem);
  EXPECT_EQ(back.variant, s.variant);
  EXPECT_EQ(back.final_kinetic, s.final_kinetic);
  ASSERT_TRUE(back.certificate && back.dt_condition);
  EXPECT_EQ(back.certificate->worst_step, 3);
  EXPECT_EQ(back.certificate->constant, 1.5);
  EXPECT_TRUE(back.certificate->holds);
  EXPECT_EQ(back.dt_condition->norms.sup_div_w, 0.2);
  EXPECT_EQ(back.dt_condition->interval, 4);
  EXPECT_FALSE(run_summary_from_json(to_json(RunSummary{})).certificate.has_value());
  EXPECT_THROW((void)run_summary_from_json("{"), InvalidArgument);
}

}  // namespace
}  // namespace oseen_ale
