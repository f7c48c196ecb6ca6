#include "pcttrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "pcttrack/angles.hpp"
#include "pcttrack/errors.hpp"

namespace pcttrack {

MetricsSummary metrics(const SimTrace& trace, double settle_time) {
  MetricsSummary m;
  m.settle_time = settle_time;
  if (trace.empty()) return m;

  const auto& recs = trace.records;
  const TraceRecord& last = recs.back();
  m.t_final = last.t;
  m.final_p_e = last.p_e;
  m.final_abs_psi_le = std::abs(last.psi_le);
  m.final_abs_u_le = std::abs(last.u_le);
  m.final_abs_e_rl = std::abs(last.e_rl);

  double sum_sq = 0.0;
  std::size_t settled = 0;
  std::size_t violations = 0;
  m.min_h = recs.front().h;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const TraceRecord& r = recs[i];
    m.min_h = std::min(m.min_h, r.h);
    if (r.t >= settle_time) {
      ++settled;
      sum_sq += r.p_e * r.p_e;
      m.max_p_e_settled = std::max(m.max_p_e_settled, r.p_e);
      m.max_abs_psi_le_settled = std::max(m.max_abs_psi_le_settled, std::abs(r.psi_le));
      m.max_abs_u_le_settled = std::max(m.max_abs_u_le_settled, std::abs(r.u_le));
      m.max_abs_e_rl_settled = std::max(m.max_abs_e_rl_settled, std::abs(r.e_rl));
    }
    if (r.event_flags & event::surge_replaced) ++m.surge_replacements;
    if (r.event_flags & event::cbf_active) ++m.cbf_activations;
    if (r.event_flags & (event::gain_guard | event::sideslip_guard)) ++m.guard_trips;
    if (r.v2 > r.envelope) ++violations;
    if (i + 1 < recs.size()) {
      // Inputs are held over [t_i, t_{i+1}).
      const double h = recs[i + 1].t - r.t;
      m.effort_tau_u += std::abs(r.tau_u) * h;
      m.effort_tau_r += std::abs(r.tau_r) * h;
      m.effort_norm += std::hypot(r.tau_u, r.tau_r) * h;
    }
  }
  m.rms_p_e_settled = settled ? std::sqrt(sum_sq / static_cast<double>(settled)) : 0.0;
  m.envelope_violation_fraction =
      static_cast<double>(violations) / static_cast<double>(recs.size());

  auto last_nonpositive = std::find_if(recs.rbegin(), recs.rend(),
                                       [](const TraceRecord& r) { return !(r.u > 0.0); });
  if (last_nonpositive == recs.rend()) {
    m.t_c = recs.front().t;
  } else if (last_nonpositive == recs.rbegin()) {
    m.t_c = std::numeric_limits<double>::infinity();
  } else {
    m.t_c = std::prev(last_nonpositive)->t;
  }
  return m;
}

Comparison compare(const SimTrace& a, const SimTrace& b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(Errc::grid_mismatch, "traces have different lengths (" + std::to_string(a.size()) +
                                         " vs " + std::to_string(b.size()) + ")");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.records[i].t - b.records[i].t) > 1e-9) {
      throw Error(Errc::grid_mismatch, "time grids differ at row " + std::to_string(i));
    }
  }

  struct Channel {
    const char* name;
    double (*get)(const TraceRecord&);
    bool angle;
  };
  static const Channel channels[] = {
      {"x", [](const TraceRecord& r) { return r.x; }, false},
      {"y", [](const TraceRecord& r) { return r.y; }, false},
      {"psi", [](const TraceRecord& r) { return r.psi; }, true},
      {"u", [](const TraceRecord& r) { return r.u; }, false},
      {"v", [](const TraceRecord& r) { return r.v; }, false},
      {"r", [](const TraceRecord& r) { return r.r; }, false},
      {"p_e", [](const TraceRecord& r) { return r.p_e; }, false},
      {"psi_le", [](const TraceRecord& r) { return r.psi_le; }, true},
      {"u_le", [](const TraceRecord& r) { return r.u_le; }, false},
      {"e_rl", [](const TraceRecord& r) { return r.e_rl; }, false},
      {"tau_u", [](const TraceRecord& r) { return r.tau_u; }, false},
      {"tau_r", [](const TraceRecord& r) { return r.tau_r; }, false},
  };

  Comparison cmp;
  const double n = static_cast<double>(a.size());
  for (const Channel& ch : channels) {
    SignalDelta d{ch.name, 0.0, 0.0};
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double diff = ch.get(a.records[i]) - ch.get(b.records[i]);
      if (ch.angle) diff = wrap_angle(diff);
      sum_sq += diff * diff;
      d.max = std::max(d.max, std::abs(diff));
    }
    d.rms = std::sqrt(sum_sq / n);
    cmp.signals.push_back(d);
  }

  double pos_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dx = a.records[i].x - b.records[i].x;
    const double dy = a.records[i].y - b.records[i].y;
    pos_sq += dx * dx + dy * dy;
  }
  cmp.position_rms = std::sqrt(pos_sq / n);

  const MetricsSummary ma = metrics(a, 0.0);
  const MetricsSummary mb = metrics(b, 0.0);
  cmp.effort_a = ma.effort_norm;
  cmp.effort_b = mb.effort_norm;
  cmp.effort_tau_u_a = ma.effort_tau_u;
  cmp.effort_tau_u_b = mb.effort_tau_u;
  return cmp;
}

}  // namespace pcttrack
