#include "pcttrack/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "pcttrack/angles.hpp"
#include "pcttrack/errors.hpp"
#include "pcttrack/integrator.hpp"
#include "pcttrack/polar.hpp"

namespace pcttrack {

const char* to_string(Method m) {
  switch (m) {
    case Method::relaxed: return "1";
    case Method::cbf: return "2";
    case Method::none: return "none";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "1" || s == "relaxed") return Method::relaxed;
  if (s == "2" || s == "cbf") return Method::cbf;
  if (s == "none") return Method::none;
  throw Error(Errc::parse, "unknown method '" + s + "' (expected 1, 2 or none)");
}

std::size_t ScenarioConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_final / dt));
}

std::size_t ScenarioConfig::control_hold() const {
  if (!(control_period > 0.0)) return 1;
  return static_cast<std::size_t>(std::max(1LL, std::llround(control_period / dt)));
}

VesselState rk4_step(const VesselState& s, const VesselParams& p, const ControlInput& tau,
                     const Disturbance& d, double dt) {
  using Y = std::array<double, 6>;
  const Y y0{s.x, s.y, s.psi, s.u, s.v, s.r};
  const Y y1 = rk4_step(
      y0,
      [&](const Y& y) {
        const VesselStateDerivative dd =
            state_derivative({y[0], y[1], y[2], y[3], y[4], y[5]}, p, tau, d);
        return Y{dd.x_dot, dd.y_dot, dd.psi_dot, dd.u_dot, dd.v_dot, dd.r_dot};
      },
      dt);
  return {y1[0], y1[1], wrap_angle(y1[2]), y1[3], y1[4], y1[5]};
}

SurgeGuardResult surge_guard(double u, bool startup_window, std::mt19937_64& rng,
                             double surge_noise_bound) {
  if (u > 0.0 || !startup_window) return {u, false};
  // 1 - U[0, 1) lies in (0, 1].
  return {surge_noise_bound * (1.0 - uniform01(rng)), true};
}

namespace {

/// Everything upstream of the dynamic-level law that depends only on the
/// measured state and the reference.
struct KinematicStage {
  BodyPolar body;
  double psi_l = 0.0;
  ErrorPolar err;
  ErrorPolarRate err_rate;
  EmoOutput emo;
  EmoRates emo_rates;
  TrackingErrors errs;
  double alpha_rl = 0.0;
};

KinematicStage kinematic_stage(const VesselState& s, const ReferenceSample& ref,
                               const ScenarioConfig& cfg) {
  KinematicStage k;
  k.body = body_polar(s.u, s.v);
  k.psi_l = wrap_angle(s.psi + k.body.psi_a);
  k.err = error_polar({ref.x_d, ref.y_d}, {s.x, s.y});
  const Vec2 target_vel{ref.u_ld * std::cos(ref.psi_ld), ref.u_ld * std::sin(ref.psi_ld)};
  const Vec2 vessel_vel{k.body.u_l * std::cos(k.psi_l), k.body.u_l * std::sin(k.psi_l)};
  k.err_rate = error_polar_rate(k.err, target_vel, vessel_vel);
  k.emo = emo_modify(ref.u_ld, ref.psi_ld, k.err, cfg.emo);
  k.emo_rates =
      emo_rates(ref.u_ld_dot, ref.psi_ld, ref.psi_ld_dot, k.err, k.err_rate, cfg.emo);
  k.errs = kinematic_errors(k.err, k.emo, k.body.u_l, k.psi_l);
  k.alpha_rl = stabilizing_yaw_rate(k.errs, k.body.u_l, k.emo_rates.psi_ld_m_dot, cfg.gains);
  return k;
}

ReferenceSample shift_reference(const ReferenceSample& ref, double h, const ReferenceSpec& spec) {
  ReferenceSample out = ref;
  out.t = std::clamp(ref.t + h, 0.0, spec.t_end());
  out.x_d += h * ref.u_ld * std::cos(ref.psi_ld);
  out.y_d += h * ref.u_ld * std::sin(ref.psi_ld);
  out.psi_ld += h * ref.psi_ld_dot;
  const ReferenceRates rates = reference_rates(out.t, spec);
  out.u_ld = ref.u_ld + h * ref.u_ld_dot;
  out.u_ld_dot = rates.u_ld_dot;
  out.psi_ld_dot = rates.psi_ld_dot;
  return out;
}

VesselState shift_state(const VesselState& s, const VesselStateDerivative& f, double h) {
  return {s.x + h * f.x_dot, s.y + h * f.y_dot, s.psi + h * f.psi_dot,
          s.u + h * f.u_dot, s.v + h * f.v_dot, s.r + h * f.r_dot};
}

struct FlowDerivatives {
  double alpha_rl_dot = 0.0;
  double psi_a_ddot = 0.0;
};

/// Rates of alpha_rl and of the nominal sideslip rate along the disturbance
/// free vector field with the input held at `tau` (central differences in
/// the flow direction).
FlowDerivatives flow_derivatives(const VesselState& s, const ReferenceSample& ref,
                                 const ScenarioConfig& cfg, const ControlInput& tau) {
  constexpr double h = 1e-6;
  const VesselStateDerivative f = state_derivative(s, cfg.vessel, tau, {});
  const VesselState sp = shift_state(s, f, h);
  const VesselState sm = shift_state(s, f, -h);
  // Rates are evaluated at the clamped time near the ends of the reference.
  const ReferenceSample rp = shift_reference(ref, h, cfg.reference);
  const ReferenceSample rm = shift_reference(ref, -h, cfg.reference);
  const double span = 2.0 * h;

  auto sideslip = [&](const VesselState& x) {
    const auto nu_dot = nominal_body_accel(x, cfg.vessel, tau);
    return sideslip_rate(x.u, x.v, nu_dot[0], nu_dot[1]);
  };

  FlowDerivatives out;
  const double alpha_p = kinematic_stage(sp, rp, cfg).alpha_rl;
  const double alpha_m = kinematic_stage(sm, rm, cfg).alpha_rl;
  out.alpha_rl_dot = (alpha_p - alpha_m) / span;
  out.psi_a_ddot = (sideslip(sp) - sideslip(sm)) / span;
  return out;
}

TraceRecord make_record(double t, const VesselState& s, const ReferenceSample& ref, double delta) {
  TraceRecord rec;
  rec.t = t;
  rec.x = s.x;
  rec.y = s.y;
  rec.psi = s.psi;
  rec.u = s.u;
  rec.v = s.v;
  rec.r = s.r;
  rec.x_d = ref.x_d;
  rec.y_d = ref.y_d;
  rec.psi_ld = ref.psi_ld;
  rec.u_ld = ref.u_ld;
  rec.h = s.u - delta;
  return rec;
}

}  // namespace

SimTrace run_scenario(const ScenarioConfig& cfg) {
  const std::size_t n_steps = cfg.steps();
  const std::size_t hold = cfg.control_hold();
  const double control_dt = static_cast<double>(hold) * cfg.dt;

  SimTrace trace;
  trace.dt = cfg.dt;
  trace.records.reserve(n_steps + 1);

  DisturbanceSampler disturbances(cfg.seed, cfg.disturbance);
  std::mt19937_64 guard_rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  ReferenceGenerator reference(cfg.reference, cfg.dt);

  const bool relaxed = cfg.method == Method::relaxed;
  Method1Threshold floor_bounds{};
  if (relaxed) floor_bounds = method1_threshold(cfg.method1, cfg.emo, cfg.gains);
  bool startup_window = relaxed;

  VesselState state = cfg.initial;
  state.psi = wrap_angle(state.psi);
  ControllerState cstate;
  ControlInput tau{};
  ControlInput tau_star{};
  double v2_initial = 0.0;

  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const ReferenceSample& ref = reference.sample();
    TraceRecord rec = make_record(t, state, ref, cfg.cbf.delta);

    if (!std::isfinite(state.x) || !std::isfinite(state.y) || !std::isfinite(state.psi) ||
        !std::isfinite(state.u) || !std::isfinite(state.v) || !std::isfinite(state.r)) {
      trace.records.push_back(rec);
      throw GuardTrip(Errc::out_of_range, k, t, "vessel state diverged",
                      std::make_shared<const SimTrace>(std::move(trace)));
    }

    VesselState measured = state;
    if (startup_window) rec.event_flags |= event::startup_window;
    const SurgeGuardResult guard =
        surge_guard(measured.u, startup_window, guard_rng, cfg.surge_noise_bound);
    if (guard.replaced) {
      measured.u = guard.u;
      rec.event_flags |= event::surge_replaced;
    }

    try {
      const KinematicStage stage = kinematic_stage(measured, ref, cfg);
      const NominalAccel f = eval_nominal_accel(measured, cfg.vessel);
      const auto nu_dot = nominal_body_accel(measured, cfg.vessel, tau);

      ControlRefs refs;
      refs.u_ld_m = stage.emo.u_ld_m;
      refs.alpha_rl = stage.alpha_rl;
      std::optional<double> psi_a_ddot;
      if (cfg.derivative_mode == DerivativeMode::analytic) {
        const FlowDerivatives flow = flow_derivatives(measured, ref, cfg, tau);
        refs.u_ld_m_dot = stage.emo_rates.u_ld_m_dot;
        refs.alpha_rl_dot = flow.alpha_rl_dot;
        psi_a_ddot = flow.psi_a_ddot;
      }
      const std::optional<double> prev_psi_a_dot =
          cstate.initialized ? std::optional<double>(cstate.prev_psi_a_dot) : std::nullopt;
      const ReducedModel reduced = reduced_model(measured, cfg.vessel, f, nu_dot, prev_psi_a_dot,
                                                 control_dt, psi_a_ddot);

      TrackingErrors errs = stage.errs;
      errs.e_rl = stage.alpha_rl - reduced.r_l;

      if (k % hold == 0) {
        const ControlLawResult law =
            control_law(reduced, errs, stage.emo, refs, cfg.vessel, cfg.gains, cstate, control_dt);
        cstate = law.next;
        tau_star = law.tau;
        tau = tau_star;
        if (cfg.method == Method::cbf) {
          const double lower = cbf_min_surge_force(measured.u, f.f_u, cfg.vessel, cfg.cbf);
          tau = filter_qp(tau_star, lower);
        }
      }
      if (tau.tau_u != tau_star.tau_u) rec.event_flags |= event::cbf_active;

      if (k == 0) v2_initial = lyapunov_diag(errs, stage.emo, cfg.gains, 0.0, 0.0).v2;
      const LyapunovDiag diag = lyapunov_diag(errs, stage.emo, cfg.gains, t, v2_initial);

      rec.p_e = stage.err.p_e;
      rec.psi_b = stage.err.psi_b;
      rec.psi_a = reduced.psi_a;
      rec.u_l = reduced.u_l;
      rec.psi_l = reduced.psi_l;
      rec.psi_le = errs.psi_le;
      rec.u_le = errs.u_le;
      rec.e_rl = errs.e_rl;
      rec.u_ld_m = stage.emo.u_ld_m;
      rec.psi_ld_m = stage.emo.psi_ld_m;
      rec.alpha_rl = stage.alpha_rl;
      rec.tau_u_star = tau_star.tau_u;
      rec.tau_r_star = tau_star.tau_r;
      rec.tau_u = tau.tau_u;
      rec.tau_r = tau.tau_r;
      rec.v1 = diag.v1;
      rec.v2 = diag.v2;
      rec.envelope = diag.envelope;

      if (startup_window && errs.p_e <= floor_bounds.position_bound &&
          std::abs(errs.u_le) <= floor_bounds.surge_bound) {
        startup_window = false;
      }
    } catch (const Error& e) {
      if (e.code() != Errc::singular_sideslip && e.code() != Errc::gain_singular) throw;
      rec.event_flags |=
          e.code() == Errc::singular_sideslip ? event::sideslip_guard : event::gain_guard;
      trace.records.push_back(rec);
      throw GuardTrip(e.code(), k, t, e.what(), std::make_shared<const SimTrace>(std::move(trace)));
    }

    trace.records.push_back(rec);
    if (k == n_steps) break;

    const Disturbance d = disturbances.sample(cfg.vessel);
    state = rk4_step(state, cfg.vessel, tau, d, cfg.dt);
    reference.advance();
  }
  return trace;
}

}  // namespace pcttrack
