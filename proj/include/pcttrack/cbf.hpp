#pragma once

#include <string>
#include <vector>

#include "pcttrack/controller.hpp"
#include "pcttrack/emo.hpp"
#include "pcttrack/vessel.hpp"

namespace pcttrack {

struct SimTrace;

/// alpha(x) = gain * sgn(x) * |x|^exponent. The odd extension keeps the
/// function strictly increasing through zero, so the surge bound stays
/// meaningful while u is transiently below the margin.
struct ClassKFunction {
  double gain = 1.0;
  double exponent = 2.0;

  double operator()(double x) const;
};

struct CbfConfig {
  double delta = 0.6;  // surge safety margin [m/s]
  ClassKFunction alpha{};

  std::vector<std::string> validate() const;
};

/// Lower bound on tau_u keeping h = u - delta a barrier:
/// tau_u >= (d_u_max - f_u - alpha(u - delta)) / b_u.
double cbf_min_surge_force(double u, double f_u, const VesselParams& params, const CbfConfig& cfg);

/// argmin ||tau - tau_star||^2 s.t. tau_u >= tau_lower (a single half-plane,
/// so the projection is closed form).
ControlInput filter_qp(const ControlInput& tau_star, double tau_lower);

struct Method1Config {
  double v_max = 0.8;  // sway bound [m/s]
  double a_p = 1.0113;
  double a_u = 1.0113;

  std::vector<std::string> validate() const;
};

struct Method1Threshold {
  double rhs = 0.0;  // v_max + c_u a_p sqrt(eps/c) + a_u sqrt(eps/k_u)
  double c = 0.0;    // contraction rate evaluated at the candidate u_m
  double epsilon = 0.0;
  double position_bound = 0.0;  // a_p sqrt(eps/c): p_e bound after t_c
  double surge_bound = 0.0;     // a_u sqrt(eps/k_u): |u_le| bound after t_c
  bool satisfied = false;       // emo.u_m > rhs
};

/// Sufficient surge-floor condition. c depends on u_m, so it is evaluated at
/// the candidate emo.u_m. Requires a positive gain margin.
Method1Threshold method1_threshold(const Method1Config& cfg, const EmoParams& emo,
                                   const ControllerGains& gains);

/// min over the trace of h = u - delta.
double cbf_margin_trace(const SimTrace& trace, const CbfConfig& cfg);

}  // namespace pcttrack
