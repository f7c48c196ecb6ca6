#pragma once

#include <limits>
#include <string>
#include <vector>

namespace pcttrack {

/// How the reference heading evolves inside one segment.
enum class HeadingProfile {
  hold,   // psi_ld constant
  rate,   // psi_ld_dot = rate
  blend,  // psi_ld_dot = rate * exp((t - t_end) / (t - t_start)), smooth from 0 to rate
};

struct ReferenceSegment {
  double t_start = 0.0;
  double t_end = std::numeric_limits<double>::infinity();
  double u_ld = 10.0;
  HeadingProfile heading = HeadingProfile::hold;
  double rate = 0.0;  // [rad/s], unused for hold
};

struct ReferenceSpec {
  double x0 = 100.0;
  double y0 = 30.0;
  double psi0 = 1.5707963267948966;
  std::vector<ReferenceSegment> segments;

  /// Covers [t_start of first, t_end of last]; contiguous segments.
  double t_end() const;
  double min_speed() const;
  std::vector<std::string> validate(double u_m) const;
};

/// Standard three-phase reference at a given speed:
/// straight north for 60 s, a smooth blend into a -0.05 rad/s turn over
/// (60, 75] s, then a steady turn.
ReferenceSpec standard_reference(double u_ld);

struct ReferenceSample {
  double t = 0.0;
  double x_d = 0.0;
  double y_d = 0.0;
  double psi_ld = 0.0;  // accumulated, not wrapped
  double u_ld = 0.0;
  double psi_ld_dot = 0.0;
  double u_ld_dot = 0.0;
};

struct ReferenceRates {
  double u_ld = 0.0;
  double u_ld_dot = 0.0;
  double psi_ld_dot = 0.0;
};

/// Time-only part of the reference. Throws Error(out_of_range) outside the covered interval.
ReferenceRates reference_rates(double t, const ReferenceSpec& spec);

/// Integrates (x_d, y_d, psi_ld) with RK4 on a fixed grid alongside the
/// vessel. Owns the carried heading and position.
class ReferenceGenerator {
 public:
  ReferenceGenerator(ReferenceSpec spec, double dt);

  const ReferenceSample& sample() const { return current_; }
  void advance();

  const ReferenceSpec& spec() const { return spec_; }

 private:
  ReferenceSample make_sample(double t, double x, double y, double psi) const;

  ReferenceSpec spec_;
  double dt_;
  std::size_t step_ = 0;
  ReferenceSample current_;
};

/// Reference at time t obtained by stepping a generator from 0 with step dt.
ReferenceSample reference_sample(double t, const ReferenceSpec& spec, double dt = 0.01);

}  // namespace pcttrack
