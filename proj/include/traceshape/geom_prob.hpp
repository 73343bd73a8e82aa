#pragma once

#include <span>
#include <string>
#include <vector>

#include "traceshape/angles.hpp"

namespace traceshape {

/// Constants of the monitored region entering the detection-probability
/// denominators: the perimeter of the convex region Omega and the sensing
/// range.
struct ArenaParams {
  double l_omega;  // perimeter of Omega
  double r_max;

  static ArenaParams disk(double radius, double r_max) {
    return ArenaParams{kTwoPi * radius, r_max};
  }
  /// Directed-line measure of placements whose sensing strip can reach Omega.
  double monitor_measure(double theta) const {
    return 2.0 * l_omega + kTwoPi * r_max * std::abs(std::sin(theta));
  }
};

/// Half-opening of the direction window in which the whole-edge detection
/// strip has positive width; saturates at pi/2 once the strip covers every
/// direction.
double eta(double lambda, double theta, double r_max);

/// Probability that a sensor with direction offset theta observes the whole
/// edge of length lambda with positive reading.
double q_d_edge(double lambda, double theta, const ArenaParams& arena);

double expected_detectors_edge(double lambda, std::span<const double> thetas,
                               const ArenaParams& arena);

/// Probability of observing a vertex of inner angle gamma with positive
/// reading. gamma in (0, pi) or (pi, 2*pi); degenerate angles are rejected.
double q_d_vertex(double gamma, double theta, const ArenaParams& arena);

double expected_detectors_vertex(double gamma, std::span<const double> thetas,
                                 const ArenaParams& arena);

/// Direction-measure integral of the whole-edge strip restricted to
/// placements not blocked by the preceding edge across a concave vertex of
/// turn delta_xi in (0, pi). Closed form with case dispatch; `branch`
/// identifies which case fired (for coverage accounting).
struct BlockingEval {
  double value;
  int branch;
};
BlockingEval blocking_f_detailed(double lambda, double theta, double delta_xi, double r_max);

double blocking_f(double lambda, double theta, double delta_xi, double r_max);

/// Number of distinct case branches in the blocking_f closed form.
int blocking_f_branch_count();

/// Whole-edge detection probability corrected for blocking across one
/// concave vertex.
double q_d_edge_concave(double lambda, double theta, double delta_xi,
                        const ArenaParams& arena);

double expected_detectors_edge_concave(double lambda, std::span<const double> thetas,
                                       double delta_xi, const ArenaParams& arena);

}  // namespace traceshape
