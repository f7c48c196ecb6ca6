#include "pcttrack/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "pcttrack/errors.hpp"
#include "pcttrack/integrator.hpp"

namespace pcttrack {

double ReferenceSpec::t_end() const {
  return segments.empty() ? 0.0 : segments.back().t_end;
}

double ReferenceSpec::min_speed() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : segments) m = std::min(m, s.u_ld);
  return m;
}

std::vector<std::string> ReferenceSpec::validate(double u_m) const {
  std::vector<std::string> issues;
  if (segments.empty()) {
    issues.emplace_back("reference.segments must not be empty");
    return issues;
  }
  if (segments.front().t_start != 0.0) issues.emplace_back("reference must start at t = 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    std::ostringstream tag;
    tag << "reference.segments[" << i << "]";
    if (!(s.t_end > s.t_start)) issues.push_back(tag.str() + ": t_end must exceed t_start");
    if (i > 0 && s.t_start != segments[i - 1].t_end) {
      issues.push_back(tag.str() + ": not contiguous with the previous segment");
    }
    if (!(s.u_ld > 0.0)) {
      issues.push_back(tag.str() + ": u_ld must be > 0");
    } else if (s.u_ld < u_m) {
      std::ostringstream os;
      os << tag.str() << ": u_ld = " << s.u_ld << " below the floor u_m = " << u_m;
      issues.push_back(os.str());
    }
    if (!std::isfinite(s.rate)) issues.push_back(tag.str() + ": rate must be finite");
    if (s.heading == HeadingProfile::blend && !std::isfinite(s.t_end)) {
      issues.push_back(tag.str() + ": blend needs a finite t_end");
    }
  }
  if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(psi0)) {
    issues.emplace_back("reference start pose must be finite");
  }
  return issues;
}

ReferenceSpec standard_reference(double u_ld) {
  ReferenceSpec spec;
  spec.x0 = 100.0;
  spec.y0 = 30.0;
  spec.psi0 = 0.5 * 3.14159265358979323846;
  spec.segments = {
      {0.0, 60.0, u_ld, HeadingProfile::hold, 0.0},
      {60.0, 75.0, u_ld, HeadingProfile::blend, -0.05},
      {75.0, std::numeric_limits<double>::infinity(), u_ld, HeadingProfile::rate, -0.05},
  };
  return spec;
}

ReferenceRates reference_rates(double t, const ReferenceSpec& spec) {
  constexpr double kSlack = 1e-9;
  if (spec.segments.empty() || t < spec.segments.front().t_start - kSlack ||
      t > spec.t_end() + kSlack) {
    throw Error(Errc::out_of_range, "reference queried at t = " + std::to_string(t) +
                                        " outside its time span");
  }
  const auto it = std::find_if(spec.segments.begin(), spec.segments.end(),
                               [t](const ReferenceSegment& s) { return t <= s.t_end + kSlack; });
  const ReferenceSegment& seg = *it;

  ReferenceRates r;
  r.u_ld = seg.u_ld;
  r.u_ld_dot = 0.0;
  switch (seg.heading) {
    case HeadingProfile::hold:
      r.psi_ld_dot = 0.0;
      break;
    case HeadingProfile::rate:
      r.psi_ld_dot = seg.rate;
      break;
    case HeadingProfile::blend:
      // exp((t - t_end)/(t - t_start)) -> 0 as t -> t_start+, 1 at t_end.
      r.psi_ld_dot = (t <= seg.t_start)
                         ? 0.0
                         : seg.rate * std::exp((t - seg.t_end) / (t - seg.t_start));
      break;
  }
  return r;
}

namespace {

using RefState = std::array<double, 4>;  // x, y, psi, t

RefState step_reference(const RefState& y, double h, const ReferenceSpec& spec) {
  return rk4_step(
      y,
      [&spec](const RefState& s) {
        const ReferenceRates r = reference_rates(s[3], spec);
        return RefState{r.u_ld * std::cos(s[2]), r.u_ld * std::sin(s[2]), r.psi_ld_dot, 1.0};
      },
      h);
}

}  // namespace

ReferenceGenerator::ReferenceGenerator(ReferenceSpec spec, double dt)
    : spec_(std::move(spec)), dt_(dt) {
  current_ = make_sample(0.0, spec_.x0, spec_.y0, spec_.psi0);
}

ReferenceSample ReferenceGenerator::make_sample(double t, double x, double y, double psi) const {
  const ReferenceRates r = reference_rates(t, spec_);
  ReferenceSample s;
  s.t = t;
  s.x_d = x;
  s.y_d = y;
  s.psi_ld = psi;
  s.u_ld = r.u_ld;
  s.u_ld_dot = r.u_ld_dot;
  s.psi_ld_dot = r.psi_ld_dot;
  return s;
}

void ReferenceGenerator::advance() {
  const RefState next =
      step_reference({current_.x_d, current_.y_d, current_.psi_ld, current_.t}, dt_, spec_);
  ++step_;
  current_ = make_sample(static_cast<double>(step_) * dt_, next[0], next[1], next[2]);
}

ReferenceSample reference_sample(double t, const ReferenceSpec& spec, double dt) {
  (void)reference_rates(t, spec);
  RefState y{spec.x0, spec.y0, spec.psi0, 0.0};
  const auto full = static_cast<std::size_t>(std::floor(t / dt + 1e-9));
  for (std::size_t k = 0; k < full; ++k) {
    y = step_reference(y, dt, spec);
    y[3] = static_cast<double>(k + 1) * dt;
  }
  const double rest = t - y[3];
  if (rest > 1e-12) y = step_reference(y, rest, spec);
  const ReferenceRates r = reference_rates(t, spec);
  return {t, y[0], y[1], y[2], r.u_ld, r.psi_ld_dot, r.u_ld_dot};
}

}  // namespace pcttrack
