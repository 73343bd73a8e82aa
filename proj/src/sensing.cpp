#include "traceshape/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "traceshape/parallel.hpp"
#include "traceshape/rng.hpp"

namespace traceshape {

std::pair<double, double> line_offset_interval(LineMode mode, double omega_radius,
                                               double r_max, double theta) {
  double lo = -omega_radius;
  double hi = omega_radius;
  if (mode == LineMode::kMonitorOmega) {
    double st = std::sin(theta);
    // The beam points to the side sign(sin theta) of the line, so lines that
    // far may still sweep the disk from the opposite side.
    if (st >= 0.0) {
      lo -= r_max * st;
    } else {
      hi -= r_max * st;
    }
  }
  return {lo, hi};
}

LinePlacement sample_line(std::mt19937_64& rng, LineMode mode, double omega_radius,
                          double r_max, double theta) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double phi = kTwoPi * u01(rng);
  auto [lo, hi] = line_offset_interval(mode, omega_radius, r_max, theta);
  double offset = lo + (hi - lo) * u01(rng);
  return LinePlacement{phi, offset};
}

SensorConfig make_sensor(int id, const Scenario& scenario, std::mt19937_64& rng) {
  SensorConfig s;
  s.id = id;
  s.theta = scenario.theta_for(id);
  s.v = scenario.v;
  auto line = sample_line(rng, scenario.line_mode, scenario.omega_radius, scenario.r_max,
                          s.theta);
  s.phi = line.phi;
  s.offset = line.offset;

  // Traverse the disk grown by r_max: outside it the beam cannot reach Omega,
  // so no observation is ever truncated by the window.
  double window_radius = scenario.omega_radius + scenario.r_max;
  double half_chord_sq = window_radius * window_radius - s.offset * s.offset;
  Point normal(-std::sin(s.phi), std::cos(s.phi));
  if (half_chord_sq <= 0.0) {
    s.start = s.offset * normal;
    s.duration = 0.0;
  } else {
    double half_chord = std::sqrt(half_chord_sq);
    s.start = s.offset * normal - half_chord * unit(s.phi);
    s.duration = 2.0 * half_chord / s.v;
  }
  if (scenario.duration) s.duration = *scenario.duration;
  return s;
}

std::vector<TraceSample> simulate_trace(const SensorConfig& sensor, const Scenario& scenario,
                                        std::mt19937_64& rng) {
  std::vector<TraceSample> out;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double beam = sensor.phi + sensor.theta;
  const double dt = scenario.report_period;
  const long n_epochs = static_cast<long>(std::floor(sensor.duration / dt));
  out.reserve(static_cast<std::size_t>(std::max(0L, n_epochs + 1)));
  for (long k = 0; k <= n_epochs; ++k) {
    double t = static_cast<double>(k) * dt;
    double lost = u01(rng);  // always drawn, so the stream is loss-independent
    auto r = ray_cast(sensor_position(sensor, t), beam, scenario.polygon);
    if (lost < scenario.epsilon_l) continue;
    std::optional<double> reading;
    if (r && *r <= scenario.r_max) reading = *r;
    out.push_back(TraceSample{sensor.id, t, reading});
  }
  return out;
}

std::vector<std::vector<TraceSample>> simulate_all(const Scenario& scenario) {
  std::vector<std::vector<TraceSample>> traces(static_cast<std::size_t>(scenario.n_s));
  parallel_for(scenario.n_s, [&](int i) {
    auto rng = substream(scenario.seed, static_cast<std::uint64_t>(i));
    SensorConfig sensor = make_sensor(i, scenario, rng);
    traces[static_cast<std::size_t>(i)] = simulate_trace(sensor, scenario, rng);
  });
  return traces;
}

namespace {

enum class IntervalState { kMiss, kInside, kHit, kOverMax };

struct Interval {
  double t0, t1;
  IntervalState state;
  int edge;
  double r0, r1;  // valid for kHit / kOverMax
};

// Signed distance along the beam from p(t) to the supporting line of edge j.
double line_distance_at(const SensorConfig& sensor, const Point& beam_dir,
                        const DirectedEdge& edge, double t) {
  Point origin = sensor_position(sensor, t);
  Point e = edge.head - edge.tail;
  return cross2(edge.tail - origin, e) / cross2(beam_dir, e);
}

}  // namespace

AnalyticTrace analytic_trace(const SensorConfig& sensor, const Scenario& scenario) {
  AnalyticTrace trace;
  trace.duration = sensor.duration;
  if (sensor.duration <= 0.0) return trace;

  const PolygonTarget& poly = scenario.polygon;
  const double beam = sensor.phi + sensor.theta;
  const Point b = unit(beam);
  const Point u = unit(sensor.phi);
  const double v = sensor.v;
  const double sin_theta = std::sin(sensor.theta);

  std::vector<double> times{0.0, sensor.duration};

  // The beam line sweeps past each vertex exactly once (unless parallel to
  // the motion); the tracked edge can only change at those instants or when
  // the sensor itself crosses the boundary.
  if (std::abs(sin_theta) > 1e-12) {
    for (const auto& e : poly.edges()) {
      double t = cross2(e.tail - sensor.start, b) / (v * sin_theta);
      times.push_back(t);
    }
  }
  for (const auto& e : poly.edges()) {
    Point seg = e.head - e.tail;
    double denom = cross2(u, seg);
    if (std::abs(denom) < 1e-14) continue;
    double t = -cross2(sensor.start - e.tail, seg) / (v * denom);
    Point p = sensor_position(sensor, t);
    double s = (p - e.tail).dot(seg) / seg.squaredNorm();
    if (s >= -1e-12 && s <= 1.0 + 1e-12) times.push_back(t);
  }

  std::sort(times.begin(), times.end());
  std::vector<double> knots;
  for (double t : times) {
    if (t < -1e-12 || t > sensor.duration + 1e-12) continue;
    t = std::clamp(t, 0.0, sensor.duration);
    if (knots.empty() || t - knots.back() > 1e-11 * std::max(1.0, sensor.duration)) {
      knots.push_back(t);
    }
  }
  if (knots.size() < 2) return trace;

  std::vector<Interval> intervals;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    Interval iv{knots[i], knots[i + 1], IntervalState::kMiss, -1, 0.0, 0.0};
    double tm = 0.5 * (iv.t0 + iv.t1);
    auto hit = ray_cast_detailed(sensor_position(sensor, tm), beam, poly);
    if (!hit) {
      iv.state = IntervalState::kMiss;
    } else if (hit->edge < 0) {
      iv.state = IntervalState::kInside;
    } else {
      iv.edge = hit->edge;
      iv.r0 = line_distance_at(sensor, b, poly.edges()[iv.edge], iv.t0);
      iv.r1 = line_distance_at(sensor, b, poly.edges()[iv.edge], iv.t1);
      iv.state = IntervalState::kHit;
    }
    intervals.push_back(iv);
  }

  // Split tracked intervals where the reading crosses r_max.
  std::vector<Interval> refined;
  const double r_max = scenario.r_max;
  for (const Interval& iv : intervals) {
    if (iv.state != IntervalState::kHit) {
      refined.push_back(iv);
      continue;
    }
    bool over0 = iv.r0 > r_max;
    bool over1 = iv.r1 > r_max;
    if (over0 == over1) {
      Interval out = iv;
      out.state = over0 ? IntervalState::kOverMax : IntervalState::kHit;
      refined.push_back(out);
      continue;
    }
    double tc = iv.t0 + (iv.t1 - iv.t0) * (r_max - iv.r0) / (iv.r1 - iv.r0);
    Interval first = iv, second = iv;
    first.t1 = tc;
    first.r1 = r_max;
    first.state = over0 ? IntervalState::kOverMax : IntervalState::kHit;
    second.t0 = tc;
    second.r0 = r_max;
    second.state = over1 ? IntervalState::kOverMax : IntervalState::kHit;
    refined.push_back(first);
    refined.push_back(second);
  }

  // Merge same-edge neighbours and classify boundary events.
  const double cont_tol = 1e-9 * std::max(1.0, r_max);
  std::vector<TracePiece> pieces;
  std::size_t i = 0;
  while (i < refined.size()) {
    if (refined[i].state != IntervalState::kHit) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < refined.size() && refined[j + 1].state == IntervalState::kHit &&
           refined[j + 1].edge == refined[i].edge) {
      ++j;
    }
    TracePiece piece;
    piece.t_begin = refined[i].t0;
    piece.t_end = refined[j].t1;
    piece.r_begin = refined[i].r0;
    piece.r_end = refined[j].r1;
    piece.edge = refined[i].edge;

    auto classify = [&](bool at_start, std::size_t self, long neighbor) -> TraceEvent {
      double r_here = at_start ? refined[self].r0 : refined[self].r1;
      if (neighbor < 0 || neighbor >= static_cast<long>(refined.size())) {
        return TraceEvent::kTraceEdge;
      }
      const Interval& nb = refined[static_cast<std::size_t>(neighbor)];
      switch (nb.state) {
        // A neighbour beyond the range bound reads as NO DETECTION exactly
        // like a miss, so both classify by the reading at this side.
        case IntervalState::kMiss:
        case IntervalState::kOverMax:
          return (r_here < r_max - cont_tol) ? (at_start ? TraceEvent::kFromEmptyBelowMax
                                                         : TraceEvent::kToEmptyBelowMax)
                                             : TraceEvent::kRangeBoundary;
        case IntervalState::kInside:
          return TraceEvent::kZeroContact;
        case IntervalState::kHit: {
          double r_nb = at_start ? nb.r1 : nb.r0;
          if (std::abs(r_nb - r_here) <= cont_tol) return TraceEvent::kSlopeChange;
          return (r_here < r_nb) == at_start ? TraceEvent::kJumpDown : TraceEvent::kJumpUp;
        }
      }
      return TraceEvent::kTraceEdge;
    };
    piece.start_event = classify(true, i, static_cast<long>(i) - 1);
    piece.end_event = classify(false, j, static_cast<long>(j) + 1);
    pieces.push_back(piece);
    i = j + 1;
  }
  trace.pieces = std::move(pieces);
  return trace;
}

std::optional<double> sample_analytic(const AnalyticTrace& trace, const SensorConfig& sensor,
                                      const Scenario& scenario, double t) {
  const double beam = sensor.phi + sensor.theta;
  const Point b = unit(beam);
  for (const TracePiece& piece : trace.pieces) {
    if (t < piece.t_begin || t > piece.t_end) continue;
    const DirectedEdge& e = scenario.polygon.edges()[piece.edge];
    auto hit = ray_hit_segment(sensor_position(sensor, t), b, e.tail, e.head);
    if (!hit) break;  // only at exact piece boundaries
    if (hit->distance <= scenario.r_max) return hit->distance;
    return std::nullopt;
  }
  if (scenario.polygon.contains(sensor_position(sensor, t))) return 0.0;
  return std::nullopt;
}

}  // namespace traceshape
