#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pcttrack/cbf.hpp"
#include "pcttrack/controller.hpp"
#include "pcttrack/emo.hpp"
#include "pcttrack/reference.hpp"
#include "pcttrack/trace.hpp"
#include "pcttrack/vessel.hpp"

namespace pcttrack {

/// How surge positivity is handled.
enum class Method {
  relaxed,  // "1": tau = tau*, startup surge replacement until t_c
  cbf,      // "2": tau* projected onto the barrier half-plane
  none,
};

const char* to_string(Method m);
Method method_from_string(const std::string& s);

enum class DerivativeMode {
  backward,  // backward differences held in ControllerState
  analytic,  // model-based derivatives along the nominal flow (noise-free validation)
};

struct ScenarioConfig {
  std::string name = "custom";
  VesselParams vessel{};
  ControllerGains gains{};
  EmoParams emo{};
  Method method = Method::relaxed;
  CbfConfig cbf{};
  Method1Config method1{};
  ReferenceSpec reference = standard_reference(10.0);

  double dt = 0.01;
  double t_final = 120.0;
  double control_period = 0.0;  // 0: controller runs every integration step
  std::uint64_t seed = 1;
  DisturbanceMode disturbance = DisturbanceMode::uniform;
  DerivativeMode derivative_mode = DerivativeMode::backward;
  double surge_noise_bound = 0.05;  // Delta_u [m/s]
  double settle_time = 60.0;        // metrics window start [s]

  VesselState initial{50.0, 5.0, 0.5235987755982988, 1.0, 0.0, 0.0};

  std::size_t steps() const;
  std::size_t control_hold() const;
};

/// Integrates the vessel over one step with tau and d held constant.
VesselState rk4_step(const VesselState& s, const VesselParams& p, const ControlInput& tau,
                     const Disturbance& d, double dt);

struct SurgeGuardResult {
  double u = 0.0;
  bool replaced = false;
};

/// Startup replacement of a non-positive measured surge speed by a random
/// value in (0, surge_noise_bound]. Outside the startup window a non-positive
/// u is returned unchanged so the sideslip singularity surfaces downstream.
SurgeGuardResult surge_guard(double u, bool startup_window, std::mt19937_64& rng,
                             double surge_noise_bound);

/// Closed loop: sense, transform, modify, control, filter, integrate.
/// Deterministic for a fixed config. Throws GuardTrip with the step index
/// when a singularity guard trips.
SimTrace run_scenario(const ScenarioConfig& cfg);

}  // namespace pcttrack
