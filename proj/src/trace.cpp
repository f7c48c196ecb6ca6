#include "pcttrack/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcttrack/errors.hpp"

namespace pcttrack {

namespace {

// Column order must match kTraceColumns.
std::array<double*, 30> numeric_fields(TraceRecord& r) {
  return {&r.t,      &r.x,        &r.y,          &r.psi,        &r.u,     &r.v,
          &r.r,      &r.x_d,      &r.y_d,        &r.psi_ld,     &r.u_ld,  &r.p_e,
          &r.psi_b,  &r.psi_a,    &r.u_l,        &r.psi_l,      &r.psi_le, &r.u_le,
          &r.e_rl,   &r.u_ld_m,   &r.psi_ld_m,   &r.alpha_rl,   &r.tau_u_star, &r.tau_r_star,
          &r.tau_u,  &r.tau_r,    &r.v1,         &r.v2,         &r.envelope, &r.h};
}

void append_number(std::string& line, double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  line.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  std::string line;
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
    if (i) line += ',';
    line += kTraceColumns[i];
  }
  out << line << '\n';
  for (const auto& rec : trace.records) {
    TraceRecord copy = rec;
    line.clear();
    for (double* field : numeric_fields(copy)) {
      append_number(line, *field);
      line += ',';
    }
    line += std::to_string(rec.event_flags);
    out << line << '\n';
  }
}

void write_trace_csv(const std::string& path, const SimTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot open " + path + " for writing");
  write_trace_csv(out, trace);
  if (!out) throw Error(Errc::io, "failed writing " + path);
}

SimTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse, "trace CSV is empty");
  {
    std::istringstream hs(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(hs, cell, ',')) {
      if (i >= kTraceColumns.size() || cell != kTraceColumns[i]) {
        throw Error(Errc::parse, "unexpected trace CSV header column '" + cell + "'");
      }
      ++i;
    }
    if (i != kTraceColumns.size()) throw Error(Errc::parse, "trace CSV header is incomplete");
  }

  SimTrace trace;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    TraceRecord rec;
    auto fields = numeric_fields(rec);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t i = 0; i <= fields.size(); ++i) {
      const char* stop = std::find(p, end, ',');
      std::from_chars_result res{};
      if (i < fields.size()) {
        // strtod keeps "inf"/"nan" support that from_chars lacks for doubles on older toolchains
        std::string cell(p, stop);
        char* tail = nullptr;
        *fields[i] = std::strtod(cell.c_str(), &tail);
        if (cell.empty() || tail != cell.c_str() + cell.size()) {
          throw Error(Errc::parse, "malformed number in trace CSV row " + std::to_string(row));
        }
      } else {
        res = std::from_chars(p, stop, rec.event_flags);
        if (res.ec != std::errc{} || res.ptr != stop || stop != end) {
          throw Error(Errc::parse, "malformed event_flags in trace CSV row " + std::to_string(row));
        }
      }
      if (i < fields.size() && stop == end) {
        throw Error(Errc::parse, "too few columns in trace CSV row " + std::to_string(row));
      }
      p = stop + 1;
    }
    trace.records.push_back(rec);
  }
  if (trace.records.size() >= 2) trace.dt = trace.records[1].t - trace.records[0].t;
  return trace;
}

SimTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  return read_trace_csv(in);
}

}  // namespace pcttrack
