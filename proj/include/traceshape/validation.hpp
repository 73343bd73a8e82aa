#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "traceshape/geom_prob.hpp"
#include "traceshape/geometry.hpp"

namespace traceshape {

struct McEstimate {
  double fraction = 0.0;
  double sigma = 0.0;  // binomial standard error
  long hits = 0;
  long samples = 0;
};

/// Fraction of sensor lines (drawn from the monitor measure over the disk)
/// that sweep an isolated edge of length lambda end to end with readings in
/// (0, r_max]. Evaluated from the endpoint crossings, independently of the
/// ray caster.
McEstimate mc_whole_edge_fraction(double lambda, double theta, double omega_radius,
                                  double r_max, long samples, std::uint64_t seed);

/// Fraction of sensor lines whose beam crosses the given polygon vertex with
/// the vertex itself visible at range (0, r_max].
McEstimate mc_vertex_fraction(const PolygonTarget& polygon, int vertex_index, double theta,
                              double omega_radius, double r_max, long samples,
                              std::uint64_t seed);

/// Fraction of lines sweeping an isolated edge end to end and not blocked by
/// its concave-vertex predecessor (membership form of the blocking window).
McEstimate mc_whole_edge_concave_fraction(double lambda, double theta, double delta_xi,
                                          double omega_radius, double r_max, long samples,
                                          std::uint64_t seed);

struct ProbCurvePoint {
  double theta;
  double q_edge_formula;
  double q_edge_mc;
  double q_edge_sigma;
  double q_vertex_formula;
  double q_vertex_mc;
  double q_vertex_sigma;
  bool within_3sigma;
};

/// Formula-vs-Monte-Carlo sweep over a theta grid for one edge length and
/// one vertex angle (the vertex drawn from a square / L-shaped target).
std::vector<ProbCurvePoint> probability_curve(double lambda, double gamma, double omega_radius,
                                              double r_max, int grid_points, long samples,
                                              std::uint64_t seed);

std::string probability_curve_csv(const std::vector<ProbCurvePoint>& curve);
std::string probability_curve_svg(const std::vector<ProbCurvePoint>& curve);

}  // namespace traceshape
