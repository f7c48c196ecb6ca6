#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace pcttrack {

/// Planar pose in the navigation frame and velocities in the body frame.
struct VesselState {
  double x = 0.0;    // north [m]
  double y = 0.0;    // east [m]
  double psi = 0.0;  // yaw [rad], kept in (-pi, pi]
  double u = 0.0;    // surge [m/s]
  double v = 0.0;    // sway [m/s]
  double r = 0.0;    // yaw rate [rad/s]
};

struct VesselStateDerivative {
  double x_dot = 0.0;
  double y_dot = 0.0;
  double psi_dot = 0.0;
  double u_dot = 0.0;
  double v_dot = 0.0;
  double r_dot = 0.0;
};

/// Rigid-body coefficients (inertia includes added mass), damping, input
/// gains and the known bounds of the unmatched uncertainty.
struct VesselParams {
  double m11 = 1.2e5;
  double m22 = 1.779e5;
  double m33 = 6.36e7;
  std::array<double, 3> chi_u{2.15e4, 0.2 * 2.15e4, 0.1 * 2.15e4};
  std::array<double, 3> chi_v{1.47e5, 0.2 * 1.47e5, 0.1 * 1.47e5};
  std::array<double, 3> chi_r{8.02e6, 0.2 * 8.02e6, 0.1 * 8.02e6};
  double b_u = 1.0 / 1.2e5;
  double b_r = 1.0 / 6.36e7;
  double eps_r = 0.0;  // lift induced by the yaw moment; 0 is minimum phase
  double d_u_max = 22.0 / 11.0;
  double d_v_max = 52.0 / 17.79;
  double d_r_max = 190.0 / 63.6;

  /// Bound on the projected surge disturbance cos(a) d_u + sin(a) d_v.
  double d_ul_max() const;

  /// Human readable list of violated invariants, empty when valid.
  std::vector<std::string> validate() const;
};

struct Disturbance {
  double d_u = 0.0;
  double d_v = 0.0;
  double d_r = 0.0;
};

struct ControlInput {
  double tau_u = 0.0;  // surge force [N]
  double tau_r = 0.0;  // yaw moment [N m]
};

/// Modelled (disturbance free, input free) accelerations f = (f_u, f_v, f_r).
struct NominalAccel {
  double f_u = 0.0;
  double f_v = 0.0;
  double f_r = 0.0;
};

NominalAccel eval_nominal_accel(const VesselState& s, const VesselParams& p);

/// Coriolis/centripetal part of eval_nominal_accel (even in the velocities).
NominalAccel eval_cross_terms(const VesselState& s, const VesselParams& p);

VesselStateDerivative state_derivative(const VesselState& s, const VesselParams& p,
                                       const ControlInput& tau, const Disturbance& d);

/// Body accelerations f + B tau, i.e. the part of nu_dot the controller can see.
std::array<double, 3> nominal_body_accel(const VesselState& s, const VesselParams& p,
                                         const ControlInput& tau);

/// d_i = d_i_max * (1 - 2 * rand_i) for rand_i in [0, 1].
Disturbance disturbance_from_uniform(const VesselParams& p, const std::array<double, 3>& rand);

enum class DisturbanceMode {
  uniform,   // each component uniform on [-d_max, d_max]
  extremes,  // each component +-d_max with equal probability
  none,
};

/// Uniform double in [0, 1) built from the top 53 bits of the engine output,
/// so a seed produces the same stream with every standard library.
double uniform01(std::mt19937_64& engine);

/// Seeded bounded-disturbance source, resampled once per integration step.
class DisturbanceSampler {
 public:
  DisturbanceSampler(std::uint64_t seed, DisturbanceMode mode = DisturbanceMode::uniform);

  Disturbance sample(const VesselParams& p);

 private:
  std::mt19937_64 engine_;
  DisturbanceMode mode_;
};

}  // namespace pcttrack
