#pragma once

#include <optional>
#include <random>
#include <vector>

#include "traceshape/sensing.hpp"

namespace traceshape {

using SegmentEvent = TraceEvent;

/// How a segment's duration is derived from its samples. kSpan takes the
/// raw first-to-last sample span; kSpanPlusDt widens it by half a report
/// period at each end, which removes the sampling-phase bias of kSpan.
enum class LdConvention { kSpan, kSpanPlusDt };

/// Maximal linear piece of one trace with r > 0 throughout.
struct Segment {
  int sensor_id = 0;
  int k = 0;  // index among the kept segments of this trace
  double t_s = 0.0, t_e = 0.0;
  double l_d = 0.0;      // t_e - t_s
  double s_d = 0.0;      // fitted slope of r(t), length per time
  double intercept = 0.0;  // fitted value at t = 0
  SegmentEvent start_event = SegmentEvent::kTraceEdge;
  SegmentEvent end_event = SegmentEvent::kTraceEdge;
  int first_idx = 0, last_idx = 0;  // sample indices within the trace
  int n_samples = 0;
};

struct SegmentationConfig {
  double report_period = 1.0;
  double v = 1.0;
  double r_max = 100.0;
  double jump_factor = 3.0;       // jump threshold: factor * dt * (v + |slope|)
  double slope_threshold = 0.005; // slope-change threshold, relative to v
  int min_support = 3;
  bool merge_lost_gaps = false;
  LdConvention ld_convention = LdConvention::kSpanPlusDt;
  double zero_tol = 1e-9;
};

std::vector<Segment> segment_trace(const std::vector<TraceSample>& samples,
                                   const SegmentationConfig& config);

/// Exact segments straight from an analytic trace (continuous-time oracle).
std::vector<Segment> segments_from_analytic(const AnalyticTrace& trace, int sensor_id);

struct WholeEdgeObservation {
  int sensor_id;
  int k;
  double l_d;
  double s_d;
};

struct VertexObservation {
  int sensor_id;
  int k;  // index of the first segment of the continuous pair
  double s_a, s_b;
};

struct AdjacencyObservation {
  int sensor_id;
  int k_a, k_b;
};

/// Segments whose boundary events certify that the whole edge was swept.
std::vector<WholeEdgeObservation> extract_whole_edge_observations(
    const std::vector<Segment>& segments);

/// Continuous slope-change joints; partial edge coverage is fine.
std::vector<VertexObservation> extract_vertex_observations(
    const std::vector<Segment>& segments);

/// Continuous joints where both sides are whole-edge observations.
std::vector<AdjacencyObservation> extract_adjacency_observations(
    const std::vector<Segment>& segments);

/// Slope measurement error: perturbs arctan(s_d) by N(0, epsilon_s).
double apply_slope_noise(double s_d, double epsilon_s, std::mt19937_64& rng);

struct ObservationSet {
  std::vector<WholeEdgeObservation> edges;
  std::vector<VertexObservation> vertices;
  std::vector<AdjacencyObservation> adjacencies;
};

/// Segment every trace and pool the observations, optionally perturbing the
/// fitted slopes. Traces are processed in sensor order; results are
/// deterministic for a fixed seed.
ObservationSet analyze_traces(const std::vector<std::vector<TraceSample>>& traces,
                              const SegmentationConfig& config, double epsilon_s,
                              std::uint64_t noise_seed);

}  // namespace traceshape
