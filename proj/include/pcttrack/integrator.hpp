#pragma once

#include <array>
#include <cstddef>

namespace pcttrack {

/// Classical fourth-order Runge-Kutta step for y' = f(y). Inputs held
/// constant over the step belong in the closure.
template <std::size_t N, class F>
std::array<double, N> rk4_step(const std::array<double, N>& y, F&& f, double dt) {
  auto axpy = [](const std::array<double, N>& base, const std::array<double, N>& k, double h) {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + h * k[i];
    return out;
  };
  const std::array<double, N> k1 = f(y);
  const std::array<double, N> k2 = f(axpy(y, k1, 0.5 * dt));
  const std::array<double, N> k3 = f(axpy(y, k2, 0.5 * dt));
  const std::array<double, N> k4 = f(axpy(y, k3, dt));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace pcttrack
