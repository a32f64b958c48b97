#pragma once

// Double-well potential W(s) = s^2 (1 - s)^2 / 2 and its optimal profile.

#include <cmath>

namespace mcf::potential {

constexpr double w(double s) noexcept {
  const double t = s * (1.0 - s);
  return 0.5 * t * t;
}

constexpr double w_prime(double s) noexcept {
  return s * (1.0 - s) * (1.0 - 2.0 * s);
}

constexpr double w_second(double s) noexcept {
  return 1.0 - 6.0 * s + 6.0 * s * s;
}

/// sqrt(2 W(s)) in closed form; stays exact and nonnegative outside [0, 1].
inline double sqrt_2w(double s) noexcept { return std::abs(s * (1.0 - s)); }

/// Optimal profile q(s) = 1 / (1 + e^s), solving q' = -sqrt(2 W(q)) with
/// q(0) = 1/2, q(-inf) = 1, q(+inf) = 0.
inline double profile(double s) noexcept { return 1.0 / (1.0 + std::exp(s)); }

inline double profile_derivative(double s) noexcept {
  const double c = std::cosh(0.5 * s);
  return -0.25 / (c * c);
}

/// c_W = int_0^1 sqrt(2 W(s)) ds.
constexpr double c_w() noexcept { return 1.0 / 6.0; }

} // namespace mcf::potential
