#include "pcttrack/vessel.hpp"

#include <cmath>

namespace pcttrack {

double VesselParams::d_ul_max() const { return std::hypot(d_u_max, d_v_max); }

std::vector<std::string> VesselParams::validate() const {
  std::vector<std::string> issues;
  auto positive = [&](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      issues.push_back(std::string("vessel.") + name + " must be > 0");
    }
  };
  auto non_negative = [&](double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      issues.push_back(std::string("vessel.") + name + " must be >= 0");
    }
  };
  positive(m11, "m11");
  positive(m22, "m22");
  positive(m33, "m33");
  positive(b_u, "b_u");
  positive(b_r, "b_r");
  non_negative(d_u_max, "d_u_max");
  non_negative(d_v_max, "d_v_max");
  non_negative(d_r_max, "d_r_max");
  if (!std::isfinite(eps_r)) issues.emplace_back("vessel.eps_r must be finite");
  for (const auto* chi : {&chi_u, &chi_v, &chi_r}) {
    for (double c : *chi) {
      if (!std::isfinite(c)) {
        issues.emplace_back("vessel damping coefficients must be finite");
        return issues;
      }
    }
  }
  return issues;
}

NominalAccel eval_nominal_accel(const VesselState& s, const VesselParams& p) {
  const double u = s.u, v = s.v, r = s.r;
  NominalAccel f;
  f.f_u = (p.m22 * v * r - p.chi_u[0] * u - p.chi_u[1] * std::abs(u) * u - p.chi_u[2] * u * u * u) /
          p.m11;
  // All sway damping terms dissipate. Negative chi_v[1], chi_v[2] give the
  // variant whose quadratic and cubic terms feed energy in.
  f.f_v = -(p.m11 * u * r + p.chi_v[0] * v + p.chi_v[1] * std::abs(v) * v + p.chi_v[2] * v * v * v) /
          p.m22;
  f.f_r = ((p.m11 - p.m22) * u * r - p.chi_r[0] * r - p.chi_r[1] * std::abs(r) * r -
           p.chi_r[2] * r * r * r) /
          p.m33;
  return f;
}

NominalAccel eval_cross_terms(const VesselState& s, const VesselParams& p) {
  return {p.m22 * s.v * s.r / p.m11, -p.m11 * s.u * s.r / p.m22,
          (p.m11 - p.m22) * s.u * s.r / p.m33};
}

std::array<double, 3> nominal_body_accel(const VesselState& s, const VesselParams& p,
                                         const ControlInput& tau) {
  const NominalAccel f = eval_nominal_accel(s, p);
  return {f.f_u + p.b_u * tau.tau_u, f.f_v + p.eps_r * tau.tau_r, f.f_r + p.b_r * tau.tau_r};
}

VesselStateDerivative state_derivative(const VesselState& s, const VesselParams& p,
                                       const ControlInput& tau, const Disturbance& d) {
  const double c = std::cos(s.psi);
  const double sn = std::sin(s.psi);
  const auto nu_dot = nominal_body_accel(s, p, tau);
  VesselStateDerivative out;
  out.x_dot = c * s.u - sn * s.v;
  out.y_dot = sn * s.u + c * s.v;
  out.psi_dot = s.r;
  out.u_dot = nu_dot[0] + d.d_u;
  out.v_dot = nu_dot[1] + d.d_v;
  out.r_dot = nu_dot[2] + d.d_r;
  return out;
}

Disturbance disturbance_from_uniform(const VesselParams& p, const std::array<double, 3>& rand) {
  return {p.d_u_max * (1.0 - 2.0 * rand[0]), p.d_v_max * (1.0 - 2.0 * rand[1]),
          p.d_r_max * (1.0 - 2.0 * rand[2])};
}

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

DisturbanceSampler::DisturbanceSampler(std::uint64_t seed, DisturbanceMode mode)
    : engine_(seed), mode_(mode) {}

Disturbance DisturbanceSampler::sample(const VesselParams& p) {
  switch (mode_) {
    case DisturbanceMode::none:
      return {};
    case DisturbanceMode::extremes: {
      std::array<double, 3> rand{};
      for (double& x : rand) x = (engine_() >> 63) ? 1.0 : 0.0;
      return disturbance_from_uniform(p, rand);
    }
    case DisturbanceMode::uniform:
      break;
  }
  std::array<double, 3> rand{};
  for (double& x : rand) x = uniform01(engine_);
  return disturbance_from_uniform(p, rand);
}

}  // namespace pcttrack
