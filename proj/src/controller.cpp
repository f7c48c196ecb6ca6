#include "pcttrack/controller.hpp"

#include <algorithm>
#include <cmath>

#include "pcttrack/angles.hpp"
#include "pcttrack/errors.hpp"

namespace pcttrack {

std::vector<std::string> ControllerGains::validate() const {
  std::vector<std::string> issues;
  const std::pair<double, const char*> fields[] = {
      {k_psi, "k_psi"},   {k_u, "k_u"},       {k_r, "k_r"},       {gamma_psi, "gamma_psi"},
      {gamma_u, "gamma_u"}, {gamma_r, "gamma_r"}, {eps_ul, "eps_ul"}, {eps_rl, "eps_rl"},
      {sigma, "sigma"}};
  for (const auto& [value, name] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      issues.push_back(std::string("gains.") + name + " must be > 0");
    }
  }
  return issues;
}

double fixed_point_sigma() {
  double sigma = 0.25;
  for (int i = 0; i < 200; ++i) {
    const double next = std::exp(-(sigma + 1.0));
    if (next == sigma) break;
    sigma = next;
  }
  return sigma;
}

TrackingErrors kinematic_errors(const ErrorPolar& err, const EmoOutput& emo, double u_l,
                                double psi_l) {
  TrackingErrors e;
  e.p_e = err.p_e;
  e.psi_b = err.psi_b;
  e.psi_le = wrap_angle(emo.psi_ld_m - psi_l);
  e.u_le = emo.u_ld_m - u_l;
  // Midpoint taken along the wrapped difference so that
  // cos(psi_ld_m - psi_b) - cos(psi_l - psi_b) = -2 sin(a_psi) sin(psi_le / 2).
  e.a_psi = wrap_angle(psi_l + 0.5 * e.psi_le - err.psi_b);
  return e;
}

double smooth_bound_fn(double zeta, double sigma, double eps) {
  return std::tanh(sigma * zeta / eps);
}

double sinc_half(double psi_le) {
  const double x = 0.5 * psi_le;
  if (std::abs(psi_le) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double stabilizing_yaw_rate(const TrackingErrors& errs, double u_l, double psi_ld_m_dot,
                            const ControllerGains& gains) {
  return psi_ld_m_dot + (gains.k_psi * errs.psi_le -
                         errs.p_e * u_l * std::sin(errs.a_psi) * sinc_half(errs.psi_le)) /
                            gains.gamma_psi;
}

ControlLawResult control_law(const ReducedModel& reduced, const TrackingErrors& errs,
                             const EmoOutput& emo, const ControlRefs& refs,
                             const VesselParams& params, const ControllerGains& gains,
                             const ControllerState& cstate, double dt) {
  if (reduced.b_ul < kGainGuard * params.b_u) {
    throw Error(Errc::gain_singular, "reduced surge gain b_ul = " + std::to_string(reduced.b_ul) +
                                         " below guard (psi_a = " +
                                         std::to_string(reduced.psi_a) + ")");
  }

  ControlLawResult out;
  auto backward = [&](double now, double prev) {
    return (cstate.initialized && dt > 0.0) ? (now - prev) / dt : 0.0;
  };
  out.u_ld_m_dot = refs.u_ld_m_dot ? *refs.u_ld_m_dot : backward(refs.u_ld_m, cstate.prev_u_ld_m);
  out.alpha_rl_dot =
      refs.alpha_rl_dot ? *refs.alpha_rl_dot : backward(refs.alpha_rl, cstate.prev_alpha_rl);

  const double d_ul = reduced.d_ul_max;
  const double d_r = params.d_r_max;

  const double w_u =
      out.u_ld_m_dot - reduced.f_ul +
      (gains.k_u * errs.u_le + errs.p_e * std::cos(emo.psi_ld_m - errs.psi_b)) / gains.gamma_u +
      d_ul * smooth_bound_fn(gains.gamma_u * errs.u_le * d_ul, gains.sigma, gains.eps_ul);
  const double w_r =
      out.alpha_rl_dot - reduced.f_rl +
      (gains.k_r * errs.e_rl + gains.gamma_psi * errs.psi_le) / gains.gamma_r +
      d_r * smooth_bound_fn(gains.gamma_r * errs.e_rl * d_r, gains.sigma, gains.eps_rl);

  // B_l = [[b_ul, eps_ra], [0, b_r]] is upper triangular.
  out.tau.tau_r = w_r / params.b_r;
  out.tau.tau_u = (w_u - reduced.eps_ra * out.tau.tau_r) / reduced.b_ul;

  out.next.prev_alpha_rl = refs.alpha_rl;
  out.next.prev_u_ld_m = refs.u_ld_m;
  out.next.prev_psi_a_dot = reduced.psi_a_dot;
  out.next.initialized = true;
  return out;
}

double lyapunov_rate(double c, const ControllerGains& gains) {
  return std::min({2.0 * c, 2.0 * gains.k_psi / gains.gamma_psi, 2.0 * gains.k_u / gains.gamma_u,
                   2.0 * gains.k_r / gains.gamma_r});
}

LyapunovDiag lyapunov_diag(const TrackingErrors& errs, const EmoOutput& emo,
                           const ControllerGains& gains, double t, double v2_initial) {
  LyapunovDiag d;
  d.v1 = 0.5 * (errs.p_e * errs.p_e + gains.gamma_psi * errs.psi_le * errs.psi_le);
  d.v2 = d.v1 + 0.5 * (gains.gamma_u * errs.u_le * errs.u_le + gains.gamma_r * errs.e_rl * errs.e_rl);
  d.lambda = lyapunov_rate(emo.c, gains);
  const double floor = gains.epsilon() / d.lambda;
  d.envelope = floor + (v2_initial - floor) * std::exp(-d.lambda * t);
  return d;
}

}  // namespace pcttrack
