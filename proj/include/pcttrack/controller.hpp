#pragma once

#include <optional>

#include "pcttrack/emo.hpp"
#include "pcttrack/polar.hpp"
#include "pcttrack/vessel.hpp"

namespace pcttrack {

struct ControllerGains {
  double k_psi = 40.0;
  double k_u = 800.0;
  double k_r = 100.0;
  double gamma_psi = 120.0;
  double gamma_u = 60.0;
  double gamma_r = 1.0;
  double eps_ul = 1.0;
  double eps_rl = 1.0;
  double sigma = 1.0;

  double epsilon() const { return eps_ul + eps_rl; }
  std::vector<std::string> validate() const;
};

/// Solution of sigma = exp(-(sigma + 1)), the alternative tanh shape parameter.
double fixed_point_sigma();

/// Memory for the backward-difference derivative estimates.
struct ControllerState {
  double prev_alpha_rl = 0.0;
  double prev_u_ld_m = 0.0;
  double prev_psi_a_dot = 0.0;
  bool initialized = false;
};

struct TrackingErrors {
  double p_e = 0.0;
  double psi_b = 0.0;
  double psi_le = 0.0;  // wrap(psi_ld_m - psi_l)
  double u_le = 0.0;    // u_ld_m - u_l
  double e_rl = 0.0;    // alpha_rl - r_l
  double a_psi = 0.0;   // wrap(psi_l + psi_le / 2 - psi_b)
};

/// Kinematic errors (everything except e_rl, which needs alpha_rl).
TrackingErrors kinematic_errors(const ErrorPolar& err, const EmoOutput& emo, double u_l,
                                double psi_l);

struct LyapunovDiag {
  double v1 = 0.0;
  double v2 = 0.0;
  double lambda = 0.0;
  double envelope = 0.0;
};

/// tanh(sigma * zeta / eps). Satisfies |zeta| <= zeta * phi(zeta) + eps
/// whenever sigma >= fixed_point_sigma().
double smooth_bound_fn(double zeta, double sigma, double eps);

/// sin(x/2) / (x/2) with the removable singularity filled in.
double sinc_half(double psi_le);

double stabilizing_yaw_rate(const TrackingErrors& errs, double u_l, double psi_ld_m_dot,
                            const ControllerGains& gains);

/// Reference-side signals the final law needs besides the reduced model.
struct ControlRefs {
  double u_ld_m = 0.0;
  double alpha_rl = 0.0;
  /// When set these replace the backward differences of u_ld_m and alpha_rl.
  std::optional<double> u_ld_m_dot;
  std::optional<double> alpha_rl_dot;
};

/// Guard on b_ul / b_u below which B_l is treated as singular.
inline constexpr double kGainGuard = 1e-3;

struct ControlLawResult {
  ControlInput tau;
  ControllerState next;
  double u_ld_m_dot = 0.0;
  double alpha_rl_dot = 0.0;
};

/// Backstepping law with disturbance domination. Throws
/// Error(gain_singular) when b_ul < kGainGuard * b_u.
ControlLawResult control_law(const ReducedModel& reduced, const TrackingErrors& errs,
                             const EmoOutput& emo, const ControlRefs& refs,
                             const VesselParams& params, const ControllerGains& gains,
                             const ControllerState& cstate, double dt);

/// min{2c, 2k_psi/gamma_psi, 2k_u/gamma_u, 2k_r/gamma_r}
double lyapunov_rate(double c, const ControllerGains& gains);

/// V1, V2 and the exponential envelope eps/lambda + (V2(0) - eps/lambda) e^{-lambda t}.
/// The decay rate uses the contraction rate emo.c.
LyapunovDiag lyapunov_diag(const TrackingErrors& errs, const EmoOutput& emo,
                           const ControllerGains& gains, double t, double v2_initial);

}  // namespace pcttrack
