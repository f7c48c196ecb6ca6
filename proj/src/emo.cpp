#include "pcttrack/emo.hpp"

#include <algorithm>
#include <cmath>

#include "pcttrack/angles.hpp"

namespace pcttrack {

namespace {

// Stationarity condition of -(ln(z/pi)) cos z in z = pi exp(-zeta).
double kappa_residual(double z) { return std::cos(z) - z * std::log(z / kPi) * std::sin(z); }

}  // namespace

KappaSolution solve_kappa() {
  double lo = 0.5 * kPi;  // residual > 0
  double hi = kPi;        // residual < 0
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (kappa_residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  KappaSolution sol;
  sol.z_star = 0.5 * (lo + hi);
  sol.zeta_star = -std::log(sol.z_star / kPi);
  sol.kappa = -sol.zeta_star * std::cos(sol.z_star);
  return sol;
}

double emo_kappa() {
  static const double kappa = solve_kappa().kappa;
  return kappa;
}

double check_gain_condition(const EmoParams& p) { return p.c_psi * p.u_m - 2.0 * p.c_u * p.kappa; }

double contraction_rate(const EmoParams& p) { return std::min(p.c_u, check_gain_condition(p)); }

EmoOutput emo_modify(double u_ld, double psi_ld, const ErrorPolar& err, const EmoParams& p) {
  const double delta = wrap_angle(psi_ld - err.psi_b);
  const double decay = std::exp(-p.c_psi * err.p_e);
  EmoOutput out;
  out.varphi = delta * decay;
  out.u_ld_m = u_ld + p.c_u * err.p_e * std::cos(out.varphi);
  // psi_b + varphi, kept on psi_ld's branch.
  out.psi_ld_m = psi_ld + delta * std::expm1(-p.c_psi * err.p_e);
  out.c = contraction_rate(p);
  return out;
}

double emo_closed_loop_error_rate(double u_ld, double theta, double p_e, const EmoParams& p) {
  const double phi = wrap_angle(theta) * std::exp(-p.c_psi * p_e);
  const double cphi = std::cos(phi);
  return u_ld * std::cos(theta) - (u_ld + p.c_u * p_e * cphi) * cphi;
}

double contraction_margin(double u_ld, double theta, double p_e, const EmoParams& p) {
  const double phi = wrap_angle(theta) * std::exp(-p.c_psi * p_e);
  const double cphi = std::cos(phi);
  const double sphi = std::sin(phi);
  return -p.c_u * cphi * cphi - p.c_psi * u_ld * phi * sphi -
         2.0 * p.c_u * p.c_psi * p_e * phi * sphi * cphi;
}

EmoRates emo_rates(double u_ld_dot, double psi_ld, double psi_ld_dot,
                   const ErrorPolar& err, const ErrorPolarRate& err_rate, const EmoParams& p) {
  const double delta = wrap_angle(psi_ld - err.psi_b);
  const double decay = std::exp(-p.c_psi * err.p_e);
  const double phi = delta * decay;
  const double phi_dot =
      (psi_ld_dot - err_rate.psi_b_dot) * decay - p.c_psi * err_rate.p_e_dot * phi;
  EmoRates rates;
  rates.psi_ld_m_dot = err_rate.psi_b_dot + phi_dot;
  rates.u_ld_m_dot = u_ld_dot + p.c_u * err_rate.p_e_dot * std::cos(phi) -
                     p.c_u * err.p_e * std::sin(phi) * phi_dot;
  return rates;
}

}  // namespace pcttrack
