#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace traceshape {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2*pi).
inline double modone(double t) {
  double r = t - kTwoPi * std::floor(t / kTwoPi);
  if (r >= kTwoPi) r -= kTwoPi;
  if (r < 0.0) r += kTwoPi;
  return r;
}

/// Membership in the half-open angular interval [t1, t2), taken mod 2*pi.
/// Requires t1 < t2 <= t1 + 2*pi; the interval may wrap past 2*pi.
inline bool mod_interval_contains(double t, double t1, double t2) {
  return modone(t - t1) < (t2 - t1);
}

/// Inner angle at the vertex joining edges of directions xi_j, xi_j1,
/// i.e. modone(pi - xi_j1 + xi_j). Straight or fully folded vertices are
/// rejected.
inline double inner_angle(double xi_j, double xi_j1) {
  double g = modone(kPi - xi_j1 + xi_j);
  if (g < 1e-12 || std::abs(g - kPi) < 1e-12 || g > kTwoPi - 1e-12) {
    throw std::invalid_argument("inner_angle: degenerate vertex");
  }
  return g;
}

}  // namespace traceshape
