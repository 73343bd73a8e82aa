#pragma once

#include <optional>
#include <random>
#include <vector>

#include "traceshape/geometry.hpp"

namespace traceshape {

enum class LineMode { kThroughOmega, kMonitorOmega };

/// One mobile sensor: theta and v are public, everything else (line
/// placement, start position) stays on the simulation side.
struct SensorConfig {
  int id = 0;
  double theta = 0.0;   // sensing direction offset, known to the estimator
  double v = 1.0;       // speed, known
  double phi = 0.0;     // moving direction, hidden
  double offset = 0.0;  // signed line offset from the disk center, hidden
  Point start = Point::Zero();  // entry into the sampling window, hidden
  double duration = 0.0;
};

struct Scenario {
  double omega_radius = 200.0;
  double r_max = 100.0;
  int n_s = 2000;
  PolygonTarget polygon;
  double report_period = 1.0;
  std::optional<double> duration;  // override; auto-sized when absent
  double epsilon_s = 0.0;          // slope noise s.d. (applied at analysis)
  double epsilon_l = 0.0;          // per-report loss probability
  std::uint64_t seed = 0;
  LineMode line_mode = LineMode::kMonitorOmega;
  double v = 1.0;
  std::vector<double> thetas;  // shared value when size 1, else per sensor

  double theta_for(int sensor_id) const {
    if (thetas.empty()) return kPi / 2.0;
    if (thetas.size() == 1) return thetas.front();
    return thetas[static_cast<std::size_t>(sensor_id) % thetas.size()];
  }
};

struct LinePlacement {
  double phi;
  double offset;
};

/// Draw a directed line. THROUGH_OMEGA places chords of the disk; MONITOR
/// extends the offset interval by r_max*|sin theta| on the side from which
/// the sensing strip can still reach the disk.
LinePlacement sample_line(std::mt19937_64& rng, LineMode mode, double omega_radius,
                          double r_max, double theta);

/// Offset interval sampled by sample_line, [lo, hi).
std::pair<double, double> line_offset_interval(LineMode mode, double omega_radius,
                                               double r_max, double theta);

/// Place sensor `id` on a random line and size its traversal window.
SensorConfig make_sensor(int id, const Scenario& scenario, std::mt19937_64& rng);

/// Sensor position at time t.
inline Point sensor_position(const SensorConfig& s, double t) {
  return s.start + s.v * t * unit(s.phi);
}

struct TraceSample {
  int sensor_id;
  double t;
  std::optional<double> reading;  // nullopt = NO DETECTION; lost reports absent
};

/// Sample the hidden polygon at every report epoch; readings beyond r_max
/// become NO DETECTION and each report is dropped with probability epsilon_l.
std::vector<TraceSample> simulate_trace(const SensorConfig& sensor, const Scenario& scenario,
                                        std::mt19937_64& rng);

/// All sensors of a scenario, ordered by sensor id (worker-parallel).
std::vector<std::vector<TraceSample>> simulate_all(const Scenario& scenario);

enum class TraceEvent {
  kSlopeChange,
  kJumpDown,
  kJumpUp,
  kFromEmptyBelowMax,
  kToEmptyBelowMax,
  kRangeBoundary,
  kZeroContact,
  kTraceEdge,
};

/// Maximal interval on which the reading tracks one edge linearly with
/// 0 < r <= r_max.
struct TracePiece {
  double t_begin, t_end;
  double r_begin, r_end;
  int edge;
  TraceEvent start_event, end_event;

  double slope() const { return (r_end - r_begin) / (t_end - t_begin); }
};

struct AnalyticTrace {
  std::vector<TracePiece> pieces;
  double duration = 0.0;
};

/// Exact continuous-time trace: breakpoints wherever the tracked edge, the
/// interior state, or the range bound changes. Sampling it at the report
/// epochs reproduces simulate_trace with epsilon_l = 0.
AnalyticTrace analytic_trace(const SensorConfig& sensor, const Scenario& scenario);

/// Reading at time t according to the analytic piece structure, computed
/// with the same ray arithmetic as the simulator.
std::optional<double> sample_analytic(const AnalyticTrace& trace, const SensorConfig& sensor,
                                      const Scenario& scenario, double t);

}  // namespace traceshape
