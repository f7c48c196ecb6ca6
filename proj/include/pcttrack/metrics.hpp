#pragma once

#include <string>
#include <vector>

#include "pcttrack/trace.hpp"

namespace pcttrack {

struct MetricsSummary {
  double t_final = 0.0;
  double settle_time = 0.0;

  double final_p_e = 0.0;
  double max_p_e_settled = 0.0;
  double rms_p_e_settled = 0.0;
  double final_abs_psi_le = 0.0;
  double max_abs_psi_le_settled = 0.0;
  double final_abs_u_le = 0.0;
  double max_abs_u_le_settled = 0.0;
  double final_abs_e_rl = 0.0;
  double max_abs_e_rl_settled = 0.0;

  double t_c = 0.0;  // first time after which u > 0 for the rest of the trace
  double min_h = 0.0;

  std::size_t surge_replacements = 0;
  std::size_t cbf_activations = 0;
  std::size_t guard_trips = 0;
  double envelope_violation_fraction = 0.0;

  double effort_tau_u = 0.0;  // integral of |tau_u| dt
  double effort_tau_r = 0.0;  // integral of |tau_r| dt
  double effort_norm = 0.0;   // integral of ||tau|| dt
};

/// Summary over a trace; errors after `settle_time` count as settled.
MetricsSummary metrics(const SimTrace& trace, double settle_time);

struct SignalDelta {
  std::string name;
  double rms = 0.0;
  double max = 0.0;
};

struct Comparison {
  std::vector<SignalDelta> signals;
  double position_rms = 0.0;  // RMS of the planar distance between the two runs
  double effort_a = 0.0;      // integral of ||tau|| dt
  double effort_b = 0.0;
  double effort_tau_u_a = 0.0;
  double effort_tau_u_b = 0.0;
};

/// Per-signal deltas between two traces. Throws Error(grid_mismatch) unless
/// both share dt and the time column.
Comparison compare(const SimTrace& a, const SimTrace& b);

}  // namespace pcttrack
