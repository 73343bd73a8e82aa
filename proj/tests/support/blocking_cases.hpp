#pragma once

// Stratified random inputs for the blocking closed form: draws (lambda,
// theta, delta_xi, r_max) tuples aimed at every case branch so coverage can
// be asserted.

#include <random>
#include <vector>

#include "traceshape/angles.hpp"

namespace oracles {

struct BlockingInput {
  double lambda;
  double theta;
  double delta_xi;
  double r_max;
};

inline std::vector<BlockingInput> stratified_blocking_inputs(int total, std::uint64_t seed) {
  using traceshape::kPi;
  using traceshape::kTwoPi;
  using traceshape::modone;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<BlockingInput> out;
  out.reserve(static_cast<std::size_t>(total));

  auto zone_bounds = [](int z, double e) -> std::pair<double, double> {
    switch (z) {
      case 1: return {0.0, e};
      case 2: return {e, kPi - e};
      case 3: return {kPi - e, kPi};
      case 4: return {kPi, kPi + e};
      case 5: return {kPi + e, kTwoPi - e};
      default: return {kTwoPi - e, kTwoPi};
    }
  };

  // Reachable ordered zone pairs (the advance delta_xi is in (0, pi)).
  static const int pairs[24][2] = {
      {1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 2}, {2, 3}, {2, 4}, {2, 5},
      {3, 3}, {3, 4}, {3, 5}, {3, 6}, {4, 4}, {4, 5}, {4, 6}, {4, 1},
      {5, 5}, {5, 6}, {5, 1}, {5, 2}, {6, 6}, {6, 1}, {6, 2}, {6, 3}};

  const int groups = 24 + 4;
  int per_group = total / groups;
  for (int g = 0; g < groups; ++g) {
    for (int i = 0; i < per_group; ++i) {
      BlockingInput in{};
      in.r_max = 50.0 + 100.0 * u01(rng);
      bool ok = false;
      for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
        if (g < 24) {
          double e = 0.04 + 1.45 * u01(rng);  // eta strictly below pi/2
          auto [ul, uh] = zone_bounds(pairs[g][0], e);
          auto [wl, wh] = zone_bounds(pairs[g][1], e);
          double u = ul + (uh - ul) * u01(rng);
          double w = wl + (wh - wl) * u01(rng);
          double dxi = modone(w - u);
          if (dxi <= 1e-6 || dxi >= kPi - 1e-6) continue;
          double theta = modone(-u);
          double strip = in.r_max * std::abs(std::sin(theta));
          if (strip < 1e-9) continue;
          in.lambda = strip / std::sin(e);
          in.theta = theta;
          in.delta_xi = dxi;
          ok = true;
        } else {
          // Saturated regime: lambda at or below the strip width.
          bool u_first = (g == 24 || g == 25);
          bool w_first = (g == 24 || g == 27);
          double u = u_first ? kPi * u01(rng) : kPi + kPi * u01(rng);
          double lo, hi;  // feasible delta_xi range for the target half
          if (u_first) {
            lo = w_first ? 0.0 : (kPi - u);
            hi = w_first ? (kPi - u) : kPi;
          } else {
            lo = w_first ? (kTwoPi - u) : 0.0;
            hi = w_first ? kPi : std::min(kPi, kTwoPi - u);
          }
          if (hi - lo < 1e-6) continue;
          double dxi = lo + (hi - lo) * u01(rng);
          if (dxi <= 1e-6 || dxi >= kPi - 1e-6) continue;
          double theta = modone(-u);
          double strip = in.r_max * std::abs(std::sin(theta));
          if (strip < 1e-6) continue;
          in.lambda = strip * (0.1 + 0.85 * u01(rng));
          in.theta = theta;
          in.delta_xi = dxi;
          ok = true;
        }
      }
      if (ok) out.push_back(in);
    }
  }
  // Unstratified remainder.
  while (static_cast<int>(out.size()) < total) {
    BlockingInput in{};
    in.r_max = 50.0 + 100.0 * u01(rng);
    in.theta = kTwoPi * u01(rng);
    in.delta_xi = 1e-4 + (kPi - 2e-4) * u01(rng);
    in.lambda = 5.0 + 295.0 * u01(rng);
    out.push_back(in);
  }
  return out;
}

}  // namespace oracles
