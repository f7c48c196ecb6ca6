#include "pcttrack/angles.hpp"

#include <cmath>

namespace pcttrack {

double wrap_angle(double theta) {
  double r = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

}  // namespace pcttrack
