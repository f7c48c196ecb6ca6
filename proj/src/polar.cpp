#include "pcttrack/polar.hpp"

#include <cmath>
#include <string>

#include "pcttrack/angles.hpp"
#include "pcttrack/errors.hpp"

namespace pcttrack {

BodyPolar body_polar(double u, double v) {
  if (!(u > 0.0)) {
    throw Error(Errc::singular_sideslip,
                "sideslip angle undefined for surge speed u = " + std::to_string(u));
  }
  // Two-quadrant arctan: u > 0 keeps psi_a inside (-pi/2, pi/2).
  return {std::hypot(u, v), std::atan(v / u)};
}

ErrorPolar error_polar(const Vec2& target, const Vec2& vessel) {
  const double x_e = target.x - vessel.x;
  const double y_e = target.y - vessel.y;
  const double p_e = std::hypot(x_e, y_e);
  if (p_e == 0.0) return {0.0, 0.0};
  return {p_e, wrap_angle(std::atan2(y_e, x_e))};
}

double sideslip_rate(double u, double v, double u_dot, double v_dot) {
  const double ul2 = u * u + v * v;
  return (v_dot * u - u_dot * v) / ul2;
}

ReducedModel reduced_model(const VesselState& s, const VesselParams& p, const NominalAccel& f,
                           const std::array<double, 3>& nu_dot,
                           std::optional<double> psi_a_dot_prev, double dt,
                           std::optional<double> psi_a_ddot_override) {
  const BodyPolar bp = body_polar(s.u, s.v);
  const double ca = std::cos(bp.psi_a);
  const double sa = std::sin(bp.psi_a);

  ReducedModel m;
  m.u_l = bp.u_l;
  m.psi_a = bp.psi_a;
  m.psi_l = wrap_angle(s.psi + bp.psi_a);
  m.psi_a_dot = sideslip_rate(s.u, s.v, nu_dot[0], nu_dot[1]);
  if (psi_a_ddot_override) {
    m.psi_a_ddot = *psi_a_ddot_override;
  } else if (psi_a_dot_prev && dt > 0.0) {
    m.psi_a_ddot = (m.psi_a_dot - *psi_a_dot_prev) / dt;
  }
  m.r_l = s.r + m.psi_a_dot;
  m.f_ul = ca * f.f_u + sa * f.f_v;
  m.f_rl = f.f_r + m.psi_a_ddot;
  m.b_ul = ca * p.b_u;
  m.eps_ra = sa * p.eps_r;
  m.d_ul_max = p.d_ul_max();
  return m;
}

ErrorPolarRate error_polar_rate(const ErrorPolar& err, const Vec2& target_vel,
                                const Vec2& vessel_vel) {
  const double xe_dot = target_vel.x - vessel_vel.x;
  const double ye_dot = target_vel.y - vessel_vel.y;
  const double cb = std::cos(err.psi_b);
  const double sb = std::sin(err.psi_b);
  ErrorPolarRate rate;
  rate.p_e_dot = xe_dot * cb + ye_dot * sb;
  if (err.p_e > kAzimuthRateGuard) {
    // (ye_dot x_e - xe_dot y_e) / p_e^2 with x_e = p_e cos(psi_b), y_e = p_e sin(psi_b)
    rate.psi_b_dot = (ye_dot * cb - xe_dot * sb) / err.p_e;
  }
  return rate;
}

double position_error_rate(double u_ld, double psi_ld, double u_l, double psi_l, double psi_b) {
  return u_ld * std::cos(psi_ld - psi_b) - u_l * std::cos(psi_l - psi_b);
}

}  // namespace pcttrack
