#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pcttrack/angles.hpp"
#include "pcttrack/controller.hpp"
#include "pcttrack/errors.hpp"
#include "oracles.hpp"

using namespace pcttrack;

namespace {

ReducedModel sample_model(const VesselParams& p, const VesselState& s) {
  return reduced_model(s, p, eval_nominal_accel(s, p), nominal_body_accel(s, p, {}), std::nullopt,
                       0.01);
}

}  // namespace

TEST(Gains, DefaultsAndLambda) {
  const ControllerGains g;
  EXPECT_EQ(g.k_psi, 40.0);
  EXPECT_EQ(g.k_u, 800.0);
  EXPECT_EQ(g.k_r, 100.0);
  EXPECT_EQ(g.gamma_psi, 120.0);
  EXPECT_EQ(g.gamma_u, 60.0);
  EXPECT_EQ(g.gamma_r, 1.0);
  EXPECT_EQ(g.epsilon(), 2.0);
  EXPECT_TRUE(g.validate().empty());
  EXPECT_DOUBLE_EQ(lyapunov_rate(0.2, g), 0.4);
  EXPECT_DOUBLE_EQ(lyapunov_rate(0.1, g), 0.2);
}

TEST(Gains, EveryFieldMustBePositive) {
  ControllerGains g;
  g.k_psi = 0;
  g.k_u = -1;
  g.k_r = 0;
  g.gamma_psi = 0;
  g.gamma_u = 0;
  g.gamma_r = 0;
  g.eps_ul = 0;
  g.eps_rl = 0;
  g.sigma = 0;
  EXPECT_EQ(g.validate().size(), 9u);
}

TEST(SmoothBound, Examples) {
  EXPECT_EQ(smooth_bound_fn(0.0, 1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(smooth_bound_fn(1e3, 1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(smooth_bound_fn(-1e3, 1.0, 1.0), -1.0);
  EXPECT_DOUBLE_EQ(smooth_bound_fn(-0.7, 1.0, 2.0), -smooth_bound_fn(0.7, 1.0, 2.0));
}

TEST(SmoothBound, DominationInequalityOnDenseGrid) {
  for (double sigma : {1.0, fixed_point_sigma()}) {
    for (double zeta = -100.0; zeta <= 100.0; zeta += 1e-3) {
      ASSERT_LE(std::abs(zeta), zeta * smooth_bound_fn(zeta, sigma, 1.0) + 1.0 + 1e-12)
          << "sigma " << sigma << " zeta " << zeta;
    }
  }
}

TEST(SmoothBound, FixedPointSigma) {
  // Independent Newton solve of s - exp(-(s + 1)) = 0.
  double s = 1.0;
  for (int i = 0; i < 50; ++i) {
    const double g = s - std::exp(-(s + 1.0));
    s -= g / (1.0 + std::exp(-(s + 1.0)));
  }
  EXPECT_NEAR(fixed_point_sigma(), s, 1e-14);
  EXPECT_NEAR(fixed_point_sigma(), 0.2785, 1e-4);
  // At this sigma the inequality is tight: max |z|(1 - tanh(sigma |z|)) = 1.
  double worst = 0.0;
  for (double z = 0.0; z <= 20.0; z += 1e-4) worst = std::max(worst, z * (1 - std::tanh(s * z)));
  EXPECT_NEAR(worst, 1.0, 1e-6);
}

TEST(SincHalf, Examples) {
  EXPECT_EQ(sinc_half(0.0), 1.0);
  EXPECT_NEAR(sinc_half(kPi), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(sinc_half(1e-8), 1.0 - 1e-16 / 24.0, 1e-15);
}

TEST(SincHalf, SmoothAcrossBranchSwitch) {
  // The Taylor branch and the direct quotient agree at the switch point.
  const double below = sinc_half(0.999999e-6), above = sinc_half(1.000001e-6);
  EXPECT_NEAR(below, above, 1e-15);
  for (double x = -1e-5; x <= 1e-5; x += 1e-7) {
    EXPECT_NEAR(sinc_half(x), 1.0 - x * x / 24.0, 1e-15);
  }
}

TEST(YawRate, Examples) {
  const ControllerGains g;
  TrackingErrors e;
  EXPECT_DOUBLE_EQ(stabilizing_yaw_rate(e, 3.0, 0.07, g), 0.07);

  e.psi_le = 0.2;
  EXPECT_DOUBLE_EQ(stabilizing_yaw_rate(e, 3.0, 0.07, g), 0.07 + 40.0 * 0.2 / 120.0);

  e = {};
  e.p_e = 1.0;
  e.a_psi = kPi / 2;
  EXPECT_DOUBLE_EQ(stabilizing_yaw_rate(e, 2.0, 0.07, g), 0.07 - 2.0 / 120.0);
}

TEST(YawRate, SmoothInHeadingError) {
  const ControllerGains g;
  TrackingErrors e;
  e.p_e = 4.0;
  e.a_psi = 0.9;
  const double h = 1e-7;
  double prev_slope = 0.0;
  for (double psi = -1e-5; psi <= 1e-5; psi += 1e-6) {
    e.psi_le = psi + h;
    const double up = stabilizing_yaw_rate(e, 2.0, 0.0, g);
    e.psi_le = psi - h;
    const double dn = stabilizing_yaw_rate(e, 2.0, 0.0, g);
    const double slope = (up - dn) / (2 * h);
    if (psi > -1e-5) {
      EXPECT_NEAR(slope, prev_slope, 1e-4);
    }
    prev_slope = slope;
  }
}

TEST(KinematicErrors, HalfAngleIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    EmoOutput emo;
    emo.psi_ld_m = a(rng);
    emo.u_ld_m = 2.0;
    const double psi_l = a(rng);
    const ErrorPolar err{3.0, wrap_angle(a(rng))};
    const TrackingErrors e = kinematic_errors(err, emo, 1.5, psi_l);
    ASSERT_GT(e.psi_le, -kPi);
    ASSERT_LE(e.psi_le, kPi);
    ASSERT_GT(e.a_psi, -kPi);
    ASSERT_LE(e.a_psi, kPi);
    EXPECT_DOUBLE_EQ(e.u_le, 0.5);
    const double lhs = std::cos(emo.psi_ld_m - err.psi_b) - std::cos(psi_l - err.psi_b);
    EXPECT_NEAR(lhs, -2.0 * std::sin(e.a_psi) * std::sin(0.5 * e.psi_le), 1e-12);
  }
}

TEST(ControlLaw, PerfectTrackingIsFeedbackLinearisation) {
  VesselParams p;
  p.d_u_max = p.d_v_max = p.d_r_max = 0.0;
  const VesselState s{0, 0, 0.2, 5.0, 0.3, 0.01};
  const ReducedModel m = sample_model(p, s);
  ControlRefs refs;
  refs.u_ld_m_dot = 0.0;
  refs.alpha_rl_dot = 0.0;
  const ControlLawResult r = control_law(m, TrackingErrors{}, EmoOutput{}, refs, p, ControllerGains{},
                                         ControllerState{}, 0.01);
  EXPECT_NEAR(r.tau.tau_r, -m.f_rl / p.b_r, 1e-6);
  EXPECT_NEAR(r.tau.tau_u, -m.f_ul / m.b_ul, 1e-6);
}

TEST(ControlLaw, DegenerateErrorMatchesIndependentFormula) {
  VesselParams p;
  p.eps_r = 3e-8;
  const ControllerGains g;
  const VesselState s{0, 0, 1.0, 2.0, -0.4, 0.05};
  const ReducedModel m = sample_model(p, s);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    TrackingErrors e;
    e.p_e = 0.0;
    e.psi_b = 0.0;
    e.psi_le = d(rng);
    e.u_le = d(rng);
    e.e_rl = d(rng);
    e.a_psi = d(rng);
    EmoOutput emo;
    emo.psi_ld_m = d(rng);
    ControlRefs refs;
    refs.u_ld_m_dot = d(rng);
    refs.alpha_rl_dot = d(rng);
    const ControlLawResult r = control_law(m, e, emo, refs, p, g, ControllerState{}, 0.01);
    const ControlInput ref =
        oracle::degenerate_law(m, p, g, e.u_le, e.psi_le, e.e_rl, *refs.u_ld_m_dot, *refs.alpha_rl_dot);
    EXPECT_EQ(r.tau.tau_u, ref.tau_u);
    EXPECT_EQ(r.tau.tau_r, ref.tau_r);
  }
}

TEST(ControlLaw, YawChannelIndependentOfSurgeWithoutLift) {
  const VesselParams p;
  const ControllerGains g;
  const ReducedModel m = sample_model(p, {0, 0, 0, 3.0, 0.2, 0.0});
  TrackingErrors e;
  e.e_rl = 0.3;
  e.psi_le = -0.1;
  ControlRefs refs;
  refs.alpha_rl_dot = 0.02;
  refs.u_ld_m_dot = 0.0;
  const double tau_r = control_law(m, e, EmoOutput{}, refs, p, g, ControllerState{}, 0.01).tau.tau_r;
  e.u_le = 5.0;
  e.p_e = 3.0;
  EXPECT_EQ(control_law(m, e, EmoOutput{}, refs, p, g, ControllerState{}, 0.01).tau.tau_r, tau_r);
  const double expected =
      (0.02 - m.f_rl + (g.k_r * 0.3 + g.gamma_psi * -0.1) / g.gamma_r +
       p.d_r_max * std::tanh(g.gamma_r * 0.3 * p.d_r_max)) / p.b_r;
  EXPECT_NEAR(tau_r, expected, 1e-6 * std::abs(expected));
}

TEST(ControlLaw, BackwardDifferences) {
  const VesselParams p;
  const ReducedModel m = sample_model(p, {0, 0, 0, 3.0, 0.0, 0.0});
  ControlRefs refs;
  refs.u_ld_m = 4.0;
  refs.alpha_rl = 0.1;
  const ControlLawResult first = control_law(m, {}, {}, refs, p, {}, ControllerState{}, 0.01);
  EXPECT_EQ(first.u_ld_m_dot, 0.0);
  EXPECT_EQ(first.alpha_rl_dot, 0.0);
  EXPECT_TRUE(first.next.initialized);
  refs.u_ld_m = 4.05;
  refs.alpha_rl = 0.08;
  const ControlLawResult second = control_law(m, {}, {}, refs, p, {}, first.next, 0.01);
  EXPECT_NEAR(second.u_ld_m_dot, 5.0, 1e-12);
  EXPECT_NEAR(second.alpha_rl_dot, -2.0, 1e-12);
}

TEST(ControlLaw, ContinuousAsErrorVanishes) {
  // Rates are held as inputs; only the algebraic dependence on p_e is swept.
  const VesselParams p;
  const ControllerGains g;
  const EmoParams ep;
  const ReducedModel m = sample_model(p, {0, 0, 0.4, 2.0, 0.1, 0.01});
  const double u_ld = 2.2, psi_ld = 0.5;
  ControlRefs refs;
  refs.u_ld_m_dot = 0.01;
  refs.alpha_rl_dot = -0.02;
  auto law = [&](double p_e, double psi_b) {
    const ErrorPolar err{p_e, psi_b};
    const EmoOutput emo = emo_modify(u_ld, psi_ld, err, ep);
    TrackingErrors e = kinematic_errors(err, emo, m.u_l, m.psi_l);
    const double alpha = stabilizing_yaw_rate(e, m.u_l, 0.0, g);
    e.e_rl = alpha - m.r_l;
    refs.u_ld_m = emo.u_ld_m;
    refs.alpha_rl = alpha;
    const ControlInput tau = control_law(m, e, emo, refs, p, g, ControllerState{}, 0.01).tau;
    return std::array<double, 2>{tau.tau_u * m.b_ul, tau.tau_r * p.b_r};
  };
  const auto at_zero = law(0.0, 0.0);
  for (double psi_b = -kPi + 0.1; psi_b <= kPi; psi_b += 0.3) {
    const auto near = law(1e-9, psi_b);
    EXPECT_NEAR(near[0], at_zero[0], 1e-6) << psi_b;
    EXPECT_NEAR(near[1], at_zero[1], 1e-6) << psi_b;
  }
}

TEST(ControlLaw, DominationOpposesWorstCaseDisturbance) {
  const ControllerGains g;
  const VesselParams p;
  const double d_ul = p.d_ul_max();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> e(-2.0, 2.0);
  for (int i = 0; i < 20000; ++i) {
    const double u_le = e(rng) * std::pow(10.0, -3.0 * std::abs(e(rng)));
    const double e_rl = e(rng) * std::pow(10.0, -3.0 * std::abs(e(rng)));
    const double dom_u = d_ul * smooth_bound_fn(g.gamma_u * u_le * d_ul, g.sigma, g.eps_ul);
    const double dom_r = p.d_r_max * smooth_bound_fn(g.gamma_r * e_rl * p.d_r_max, g.sigma, g.eps_rl);
    EXPECT_GE(dom_u * u_le, 0.0);
    EXPECT_GE(dom_r * e_rl, 0.0);
    for (double sign : {-1.0, 1.0}) {
      EXPECT_LE(g.gamma_u * u_le * (sign * d_ul - dom_u), g.eps_ul + 1e-12);
      EXPECT_LE(g.gamma_r * e_rl * (sign * p.d_r_max - dom_r), g.eps_rl + 1e-12);
    }
  }
}

TEST(ControlLaw, GainGuardTrips) {
  const VesselParams p;
  ReducedModel m = sample_model(p, {0, 0, 0, 1.0, 0.0, 0.0});
  m.b_ul = 0.5 * kGainGuard * p.b_u;
  try {
    control_law(m, {}, {}, {}, p, {}, {}, 0.01);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::gain_singular);
  }
}

TEST(Lyapunov, Examples) {
  const ControllerGains g;
  EmoOutput emo;
  emo.c = 0.2;
  TrackingErrors e;
  EXPECT_EQ(lyapunov_diag(e, emo, g, 0.0, 0.0).v2, 0.0);
  e.p_e = 1.0;
  LyapunovDiag d = lyapunov_diag(e, emo, g, 0.0, 0.5);
  EXPECT_DOUBLE_EQ(d.v1, 0.5);
  EXPECT_DOUBLE_EQ(d.v2, 0.5);
  EXPECT_DOUBLE_EQ(d.envelope, 0.5);
  EXPECT_DOUBLE_EQ(d.lambda, 0.4);
  e = {0.0, 0.0, 0.1, 0.2, 0.3, 0.0};
  d = lyapunov_diag(e, emo, g, 10.0, 100.0);
  EXPECT_DOUBLE_EQ(d.v1, 0.5 * 120.0 * 0.01);
  EXPECT_DOUBLE_EQ(d.v2, d.v1 + 0.5 * (60.0 * 0.04 + 0.09));
  EXPECT_DOUBLE_EQ(d.envelope, 5.0 + 95.0 * std::exp(-4.0));
}
