#include "pcttrack/cbf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcttrack/errors.hpp"
#include "pcttrack/trace.hpp"

namespace pcttrack {

double ClassKFunction::operator()(double x) const {
  return gain * std::copysign(std::pow(std::abs(x), exponent), x);
}

std::vector<std::string> CbfConfig::validate() const {
  std::vector<std::string> issues;
  if (!(delta > 0.0)) issues.emplace_back("cbf.delta must be > 0");
  if (!(alpha.gain > 0.0)) issues.emplace_back("cbf.alpha.gain must be > 0");
  if (!(alpha.exponent > 0.0)) issues.emplace_back("cbf.alpha.exponent must be > 0");
  return issues;
}

double cbf_min_surge_force(double u, double f_u, const VesselParams& params, const CbfConfig& cfg) {
  return (params.d_u_max - f_u - cfg.alpha(u - cfg.delta)) / params.b_u;
}

ControlInput filter_qp(const ControlInput& tau_star, double tau_lower) {
  return {std::max(tau_star.tau_u, tau_lower), tau_star.tau_r};
}

std::vector<std::string> Method1Config::validate() const {
  std::vector<std::string> issues;
  if (!(a_p > 1.0)) issues.emplace_back("method1.a_p must be > 1");
  if (!(a_u > 1.0)) issues.emplace_back("method1.a_u must be > 1");
  if (!(v_max >= 0.0)) issues.emplace_back("method1.v_max must be >= 0");
  return issues;
}

Method1Threshold method1_threshold(const Method1Config& cfg, const EmoParams& emo,
                                   const ControllerGains& gains) {
  Method1Threshold th;
  th.c = contraction_rate(emo);
  if (!(th.c > 0.0)) {
    throw Error(Errc::validation, "surge-floor threshold needs a positive contraction rate");
  }
  th.epsilon = gains.epsilon();
  th.position_bound = cfg.a_p * std::sqrt(th.epsilon / th.c);
  th.surge_bound = cfg.a_u * std::sqrt(th.epsilon / gains.k_u);
  th.rhs = cfg.v_max + emo.c_u * th.position_bound + th.surge_bound;
  th.satisfied = emo.u_m > th.rhs;
  return th;
}

double cbf_margin_trace(const SimTrace& trace, const CbfConfig& cfg) {
  double h_min = std::numeric_limits<double>::infinity();
  for (const auto& rec : trace.records) h_min = std::min(h_min, rec.u - cfg.delta);
  return h_min;
}

}  // namespace pcttrack
