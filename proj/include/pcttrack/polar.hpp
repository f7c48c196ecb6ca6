#pragma once

#include <optional>

#include "pcttrack/vessel.hpp"

namespace pcttrack {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Body velocities in polar form: total speed and sideslip angle.
struct BodyPolar {
  double u_l = 0.0;
  double psi_a = 0.0;  // (-pi/2, pi/2)
};

/// Position error in polar form, measured from the vessel to the target.
struct ErrorPolar {
  double p_e = 0.0;
  double psi_b = 0.0;  // (-pi, pi]; 0 by convention when p_e == 0
};

/// Two-input two-output surge/yaw model obtained from the body polar transform.
struct ReducedModel {
  double u_l = 0.0;
  double psi_a = 0.0;
  double psi_l = 0.0;      // wrap(psi + psi_a)
  double psi_a_dot = 0.0;  // nominal
  double psi_a_ddot = 0.0; // estimated
  double r_l = 0.0;        // r + psi_a_dot
  double f_ul = 0.0;
  double f_rl = 0.0;
  double b_ul = 0.0;
  double eps_ra = 0.0;
  double d_ul_max = 0.0;
};

/// Guard on p_e below which the azimuth rate is reported as zero.
inline constexpr double kAzimuthRateGuard = 1e-6;

/// Throws Error(singular_sideslip) for u <= 0.
BodyPolar body_polar(double u, double v);

ErrorPolar error_polar(const Vec2& target, const Vec2& vessel);

/// Sideslip rate (v_dot u - u_dot v) / u_l^2 for given body accelerations.
double sideslip_rate(double u, double v, double u_dot, double v_dot);

/// Builds the reduced model. `nu_dot` are the nominal body accelerations
/// (u_dot, v_dot, r_dot) used for the sideslip rate. The sideslip acceleration
/// is the backward difference against `psi_a_dot_prev` over `dt`, or zero when
/// no previous value exists, unless `psi_a_ddot_override` supplies it.
ReducedModel reduced_model(const VesselState& s, const VesselParams& p, const NominalAccel& f,
                           const std::array<double, 3>& nu_dot,
                           std::optional<double> psi_a_dot_prev, double dt,
                           std::optional<double> psi_a_ddot_override = std::nullopt);

struct ErrorPolarRate {
  double p_e_dot = 0.0;
  double psi_b_dot = 0.0;
};

/// Rates of (p_e, psi_b) given the target and vessel velocities in the
/// navigation frame. psi_b_dot is zero when p_e <= kAzimuthRateGuard.
ErrorPolarRate error_polar_rate(const ErrorPolar& err, const Vec2& target_vel,
                                const Vec2& vessel_vel);

/// Position error rate written in polar speed/heading form.
double position_error_rate(double u_ld, double psi_ld, double u_l, double psi_l, double psi_b);

}  // namespace pcttrack
