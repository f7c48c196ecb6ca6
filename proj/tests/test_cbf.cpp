#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pcttrack/cbf.hpp"
#include "pcttrack/config.hpp"
#include "pcttrack/errors.hpp"
#include "pcttrack/simulation.hpp"

using namespace pcttrack;

TEST(ClassK, OddExtension) {
  const ClassKFunction a;
  EXPECT_EQ(a(0.0), 0.0);
  EXPECT_DOUBLE_EQ(a(1.5), 2.25);
  EXPECT_DOUBLE_EQ(a(-1.5), -2.25);
  double prev = a(-5.0);
  for (double x = -5.0 + 0.01; x <= 5.0; x += 0.01) {
    EXPECT_GT(a(x), prev);
    prev = a(x);
  }
  const ClassKFunction lin{3.0, 1.0};
  EXPECT_DOUBLE_EQ(lin(-2.0), -6.0);
}

TEST(CbfBound, Examples) {
  const VesselParams p;
  const CbfConfig cfg;
  EXPECT_EQ(cbf_min_surge_force(cfg.delta, p.d_u_max, p, cfg), 0.0);
  EXPECT_NEAR(cbf_min_surge_force(cfg.delta + 1.0, 0.0, p, cfg), (p.d_u_max - 1.0) / p.b_u, 1e-9);
  VesselParams quiet = p;
  quiet.d_u_max = 0.0;
  EXPECT_EQ(cbf_min_surge_force(cfg.delta, 0.0, quiet, cfg), 0.0);
  // Below the margin the odd extension raises the bound.
  EXPECT_GT(cbf_min_surge_force(cfg.delta - 0.5, 0.0, p, cfg), p.d_u_max / p.b_u);
}

TEST(CbfBound, GuaranteesBarrierRateForAnyAdmissibleDisturbance) {
  const VesselParams p;
  const CbfConfig cfg;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> us(-2.0, 12.0), fs(-30.0, 30.0), r(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double u = us(rng), f_u = fs(rng);
    const double lower = cbf_min_surge_force(u, f_u, p, cfg);
    const double tau_u = lower + 1e4 * r(rng);
    for (double d : {-p.d_u_max, p.d_u_max, p.d_u_max * (1 - 2 * r(rng))}) {
      const double h_dot = f_u + p.b_u * tau_u + d;
      EXPECT_GE(h_dot, -cfg.alpha(u - cfg.delta) - 1e-9);
    }
  }
}

TEST(FilterQp, Examples) {
  const ControlInput inside = filter_qp({10.0, -3.0}, 5.0);
  EXPECT_EQ(inside.tau_u, 10.0);
  EXPECT_EQ(inside.tau_r, -3.0);
  const ControlInput clipped = filter_qp({0.0, 7.0}, 5.0);
  EXPECT_EQ(clipped.tau_u, 5.0);
  EXPECT_EQ(clipped.tau_r, 7.0);
}

TEST(FilterQp, MatchesKktOracleAndLineSearch) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> big(-1e6, 1e6), unit(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const ControlInput star{big(rng), big(rng)};
    const double lower = big(rng);
    const ControlInput got = filter_qp(star, lower);
    // Constraint A (tau - tau*) <= b with A = [-1, 0], b = tau*_u - lower.
    const auto kkt = oracle::project_half_plane({star.tau_u, star.tau_r}, {-1.0, 0.0}, -lower);
    const double scale = 1.0 + std::abs(star.tau_u) + std::abs(lower);
    EXPECT_NEAR(got.tau_u, kkt[0], 1e-9 * scale);
    EXPECT_NEAR(got.tau_r, kkt[1], 1e-9 * scale);
    EXPECT_GE(got.tau_u, lower);
    const double ls = oracle::line_search_tau_u(star.tau_u, lower, -3e6, 3e6);
    EXPECT_NEAR(got.tau_u, ls, 1e-6 * scale);
    // No feasible perturbation is closer.
    const double base = std::pow(got.tau_u - star.tau_u, 2) + std::pow(got.tau_r - star.tau_r, 2);
    const ControlInput alt{std::max(lower, got.tau_u + 10 * unit(rng)), got.tau_r + unit(rng)};
    EXPECT_LE(base, std::pow(alt.tau_u - star.tau_u, 2) + std::pow(alt.tau_r - star.tau_r, 2));
  }
}

TEST(FilterQp, IdempotentProjection) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-100.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const ControlInput star{d(rng), d(rng)};
    const double lower = d(rng);
    const ControlInput once = filter_qp(star, lower);
    const ControlInput twice = filter_qp(once, lower);
    EXPECT_EQ(once.tau_u, twice.tau_u);
    EXPECT_EQ(once.tau_r, twice.tau_r);
    if (star.tau_u >= lower) {
      EXPECT_EQ(once.tau_u, star.tau_u);
    }
  }
}

TEST(Method1Threshold, ReportedFeasibilityBoundary) {
  EmoParams emo;
  emo.u_m = 1.4902;
  const Method1Threshold th = method1_threshold(Method1Config{}, emo, ControllerGains{});
  EXPECT_DOUBLE_EQ(th.c, 0.2);
  EXPECT_DOUBLE_EQ(th.epsilon, 2.0);
  EXPECT_NEAR(th.rhs, 1.4902, 5e-5);
  EXPECT_DOUBLE_EQ(th.rhs, 0.8 + 0.2 * th.position_bound + th.surge_bound);
  EXPECT_NEAR(th.position_bound, 1.0113 * std::sqrt(10.0), 1e-12);
  EXPECT_NEAR(th.surge_bound, 1.0113 * std::sqrt(2.0 / 800.0), 1e-12);
}

TEST(Method1Threshold, InfimumOverMarginFactors) {
  EmoParams emo;
  emo.u_m = 1.6;
  Method1Config cfg;
  cfg.a_p = cfg.a_u = 1.0 + 1e-12;
  const double rhs = method1_threshold(cfg, emo, ControllerGains{}).rhs;
  EXPECT_NEAR(rhs, 0.8 + 0.2 * std::sqrt(10.0) + std::sqrt(2.0 / 800.0), 1e-9);
  EXPECT_NEAR(rhs, 1.4825, 1e-4);
}

TEST(Method1Threshold, Scaling) {
  EmoParams emo;
  emo.u_m = 3.0;
  Method1Config cfg;
  cfg.v_max = 0.0;
  ControllerGains g;
  const double base = method1_threshold(cfg, emo, g).rhs;
  g.eps_ul *= 4;
  g.eps_rl *= 4;
  EXPECT_NEAR(method1_threshold(cfg, emo, g).rhs, 2.0 * base, 1e-12);
  g.eps_ul = g.eps_rl = 1e-12;
  EXPECT_LT(method1_threshold(cfg, emo, g).rhs, 1e-5);
}

TEST(Method1Threshold, PresetVerdicts) {
  for (const auto& [u_m, ok] : {std::pair{1.3, false}, {1.8, true}, {10.0, true}}) {
    EmoParams emo;
    emo.u_m = u_m;
    EXPECT_EQ(method1_threshold(Method1Config{}, emo, ControllerGains{}).satisfied, ok) << u_m;
  }
}

TEST(Method1Threshold, NeedsPositiveContraction) {
  EmoParams emo;
  emo.c_u = 10.0;
  EXPECT_THROW(method1_threshold(Method1Config{}, emo, ControllerGains{}), Error);
}

TEST(Method1Config, Invariants) {
  Method1Config c;
  EXPECT_TRUE(c.validate().empty());
  c.a_p = 1.0;
  c.a_u = 0.5;
  c.v_max = -1.0;
  EXPECT_EQ(c.validate().size(), 3u);
}

TEST(CbfMarginTrace, Examples) {
  const CbfConfig cfg;
  SimTrace t;
  t.dt = 0.1;
  for (int k = 0; k < 5; ++k) {
    TraceRecord r;
    r.t = 0.1 * k;
    r.u = cfg.delta + 0.1;
    t.records.push_back(r);
  }
  EXPECT_NEAR(cbf_margin_trace(t, cfg), 0.1, 1e-15);
  t.records[0].u = 0.2;
  EXPECT_NEAR(cbf_margin_trace(t, cfg), -0.4, 1e-15);
}

TEST(CbfClosedLoop, BarrierRateHoldsAtEveryClippedSample) {
  // At each sample where the filter acted, the applied surge force keeps
  // h_dot >= -alpha(h) even against the worst admissible surge disturbance.
  ScenarioConfig cfg = preset("fig5-slow");
  cfg.method = Method::cbf;
  cfg.disturbance = DisturbanceMode::extremes;
  cfg.t_final = 60.0;
  const SimTrace trace = run_scenario(cfg);
  std::size_t active = 0;
  for (const auto& r : trace.records) {
    if (!(r.event_flags & event::cbf_active)) continue;
    ++active;
    const VesselState s{r.x, r.y, r.psi, r.u, r.v, r.r};
    const double push = cfg.vessel.b_u * r.tau_u;
    const double h_dot_worst = eval_nominal_accel(s, cfg.vessel).f_u + push - cfg.vessel.d_u_max;
    ASSERT_GE(h_dot_worst + cfg.cbf.alpha(r.h), -1e-9 * (1.0 + std::abs(push))) << r.t;
  }
  EXPECT_GT(active, 100u);
  EXPECT_GE(cbf_margin_trace(trace, cfg.cbf), -1e-3);
}

TEST(CbfClosedLoop, ForwardInvarianceOnPresets) {
  for (const auto& name : preset_names()) {
    ScenarioConfig cfg = preset(name);
    cfg.method = Method::cbf;
    ASSERT_GT(cfg.initial.u, cfg.cbf.delta);
    EXPECT_GE(cbf_margin_trace(run_scenario(cfg), cfg.cbf), -1e-3) << name;
  }
}
