#pragma once

#include <optional>
#include <vector>

#include "traceshape/geom_prob.hpp"
#include "traceshape/gmm1d.hpp"
#include "traceshape/segmentation.hpp"

namespace traceshape {

/// Everything the estimation side is allowed to know: sensing direction and
/// speed per sensor, the range bound and the monitored perimeter. There is
/// deliberately no field for line placements or positions.
struct KnownParams {
  double r_max = 100.0;
  double l_omega = 0.0;
  std::vector<double> thetas;  // indexed by sensor id
  std::vector<double> vs;

  double theta_of(int sensor_id) const { return thetas.at(static_cast<std::size_t>(sensor_id)); }
  double v_of(int sensor_id) const { return vs.at(static_cast<std::size_t>(sensor_id)); }
  ArenaParams arena() const { return ArenaParams{l_omega, r_max}; }
};

/// Per-observation edge length: v * l_d * sqrt(s^2 + 2 s cos(theta) + 1)
/// with s the slope normalized by the speed.
double temp_length(const WholeEdgeObservation& obs, double v, double theta);

/// Edge direction relative to the (unknown) moving direction, recovered from
/// a normalized slope. Result in [0, 2*pi).
double relative_direction(double s_d, double theta);

/// Per-observation inner angle from the normalized slopes of two segments
/// meeting continuously. Requires sin(theta) != 0.
double temp_angle(double s_a, double s_b, double theta);

struct ClassMember {
  int sensor_id;
  int k;
  double value;  // temporary estimate
};

struct LengthClass {
  std::vector<ClassMember> members;
  double lambda_hat = 0.0;
  double expected_per_edge = 0.0;  // Eq.(7)-style expectation at lambda_hat
  double count_raw = 0.0;          // members / expectation before rounding
  int count_hat = 0;
  std::optional<int> count_hat_uncorrected;  // set when concave-corrected
};

struct AngleClass {
  std::vector<ClassMember> members;
  double gamma_hat = 0.0;
  double expected_per_vertex = 0.0;
  double count_raw = 0.0;
  int count_hat = 0;
};

struct VertexHypothesis {
  int angle_class;
  int left;   // length class of the first edge in boundary order, -1 absent
  int right;  // length class of the second edge, -1 absent
  int support;
};

struct AdjacencyCount {
  int n_classes = 0;
  std::vector<int> counts;  // row-major (from, to)
  std::vector<std::pair<int, int>> connected;

  int at(int from, int to) const { return counts[from * n_classes + to]; }
};

struct EstimatorConfig {
  Gmm1dConfig gmm;
  int min_support = 0;  // 0: max(3, 10% of the median length-class size)
  double degenerate_angle_tol = 0.02;  // radians around pi
  double min_edge_ld = 0.0;  // drop whole-edge observations shorter than this
};

double class_length_estimate(const LengthClass& cls);
double class_angle_estimate(const AngleClass& cls);

/// Round a class size divided by the per-edge expectation to a multiplicity,
/// never below 1 for a non-empty class.
int class_edge_count(int class_size, double expected);
int class_vertex_count(int class_size, double expected);

int resolve_min_support(const EstimatorConfig& config,
                        const std::vector<LengthClass>& length_classes);

std::vector<VertexHypothesis> combine_vertices(
    const std::vector<VertexObservation>& vertex_obs,
    const std::vector<WholeEdgeObservation>& edge_obs,
    const std::vector<LengthClass>& length_classes,
    const std::vector<AngleClass>& angle_classes, const KnownParams& known, int min_support);

AdjacencyCount order_adjacency(const std::vector<AdjacencyObservation>& adjacency_obs,
                               const std::vector<WholeEdgeObservation>& edge_obs,
                               const std::vector<LengthClass>& length_classes,
                               const KnownParams& known, int min_support);

/// Replace the plain detector expectation by the blocking-corrected one for
/// length classes that participate in a concave vertex.
void concave_correction(std::vector<LengthClass>& length_classes,
                        const std::vector<AngleClass>& angle_classes,
                        const std::vector<VertexHypothesis>& hypotheses,
                        const KnownParams& known);

struct EstimationResult {
  std::vector<LengthClass> length_classes;
  std::vector<AngleClass> angle_classes;
  std::vector<VertexHypothesis> vertex_hypotheses;
  AdjacencyCount adjacency;
  int min_support_used = 0;
  int discarded_degenerate_angles = 0;
  int total_edge_count() const;
  int total_vertex_count() const;
};

/// The full pipeline: lengths, angles, combining, order, and the concave
/// compensation when a reflex angle class shows up.
EstimationResult estimate_shape(const ObservationSet& observations, const KnownParams& known,
                                const EstimatorConfig& config = {});

}  // namespace traceshape
