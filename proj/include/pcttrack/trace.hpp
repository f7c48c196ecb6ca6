#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pcttrack {

namespace event {
inline constexpr std::uint32_t surge_replaced = 1u << 0;  // measured u <= 0 replaced during startup
inline constexpr std::uint32_t cbf_active = 1u << 1;      // barrier constraint clipped tau_u
inline constexpr std::uint32_t gain_guard = 1u << 2;      // b_ul below guard
inline constexpr std::uint32_t sideslip_guard = 1u << 3;  // u <= 0 outside startup window
inline constexpr std::uint32_t startup_window = 1u << 4;  // before the detected t_c
}  // namespace event

/// One row of the trace CSV.
struct TraceRecord {
  double t = 0.0;
  double x = 0.0, y = 0.0, psi = 0.0, u = 0.0, v = 0.0, r = 0.0;
  double x_d = 0.0, y_d = 0.0, psi_ld = 0.0, u_ld = 0.0;
  double p_e = 0.0, psi_b = 0.0, psi_a = 0.0, u_l = 0.0, psi_l = 0.0;
  double psi_le = 0.0, u_le = 0.0, e_rl = 0.0;
  double u_ld_m = 0.0, psi_ld_m = 0.0, alpha_rl = 0.0;
  double tau_u_star = 0.0, tau_r_star = 0.0, tau_u = 0.0, tau_r = 0.0;
  double v1 = 0.0, v2 = 0.0, envelope = 0.0, h = 0.0;
  std::uint32_t event_flags = 0;

  bool operator==(const TraceRecord&) const = default;
};

inline constexpr std::array<std::string_view, 31> kTraceColumns{
    "t",      "x",        "y",          "psi",        "u",     "v",     "r",    "x_d",
    "y_d",    "psi_ld",   "u_ld",       "p_e",        "psi_b", "psi_a", "u_l",  "psi_l",
    "psi_le", "u_le",     "e_rl",       "u_ld_m",     "psi_ld_m", "alpha_rl", "tau_u_star",
    "tau_r_star", "tau_u", "tau_r",     "V1",         "V2",    "envelope", "h", "event_flags"};

/// Time-indexed closed-loop record on a uniform grid.
struct SimTrace {
  double dt = 0.0;
  std::vector<TraceRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

/// Header row, then one row per record, numbers with 17 significant digits.
void write_trace_csv(std::ostream& out, const SimTrace& trace);
void write_trace_csv(const std::string& path, const SimTrace& trace);

/// Parses the CSV produced by write_trace_csv. Throws Error(parse) on a
/// header mismatch or malformed row, Error(io) if the file cannot be read.
SimTrace read_trace_csv(std::istream& in);
SimTrace read_trace_csv(const std::string& path);

}  // namespace pcttrack
