#pragma once

#include "pcttrack/polar.hpp"

namespace pcttrack {

struct KappaSolution {
  double z_star = 0.0;     // root of cos z = z ln(z/pi) sin z on (pi/2, pi)
  double zeta_star = 0.0;  // minimiser of zeta cos(pi e^-zeta), for c_psi = 1
  double kappa = 0.0;      // -min_zeta zeta cos(pi e^-zeta)
};

/// Bisection on (pi/2, pi) to 1e-10.
KappaSolution solve_kappa();

/// solve_kappa().kappa, computed once.
double emo_kappa();

struct EmoParams {
  double c_u = 0.2;    // speed correction gain [1/s]
  double c_psi = 0.2;  // orientation decay gain [1/m]
  double u_m = 1.0;    // reference speed floor [m/s]
  double kappa = emo_kappa();
};

/// c_psi u_m - 2 c_u kappa; the modification is admissible when positive.
double check_gain_condition(const EmoParams& p);

/// min{c_u, gain margin}: the guaranteed contraction rate of p_e.
double contraction_rate(const EmoParams& p);

struct EmoOutput {
  double u_ld_m = 0.0;
  double psi_ld_m = 0.0;
  double varphi = 0.0;  // wrap(psi_ld - psi_b) * exp(-c_psi p_e), in [-pi, pi]
  double c = 0.0;
};

/// Exponentially modified speed and heading. The heading is returned on the
/// same branch as psi_ld, so the output equals the input reference at p_e = 0.
EmoOutput emo_modify(double u_ld, double psi_ld, const ErrorPolar& err, const EmoParams& p);

/// p_e_dot when the vessel follows the modified reference exactly, as a
/// function of p_e with the bearing difference `theta` = psi_ld - psi_b fixed.
double emo_closed_loop_error_rate(double u_ld, double theta, double p_e, const EmoParams& p);

/// Analytic d(p_e_dot)/d(p_e) of emo_closed_loop_error_rate.
double contraction_margin(double u_ld, double theta, double p_e, const EmoParams& p);

struct EmoRates {
  double u_ld_m_dot = 0.0;
  double psi_ld_m_dot = 0.0;
};

/// Time derivatives of the modified reference along the current motion.
EmoRates emo_rates(double u_ld_dot, double psi_ld, double psi_ld_dot,
                   const ErrorPolar& err, const ErrorPolarRate& err_rate, const EmoParams& p);

}  // namespace pcttrack
