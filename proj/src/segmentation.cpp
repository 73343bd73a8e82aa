#include "traceshape/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "traceshape/rng.hpp"

namespace traceshape {

namespace {

struct Run {
  std::vector<int> idx;  // indices into the sample vector, consecutive epochs
  // What the receiver saw just before / after the run.
  enum class Neighbor { kTraceEdge, kEmpty, kZero } before, after;
  double t_before = 0.0, t_after = 0.0;
};

struct Fit {
  double slope;
  double intercept;
};

Fit ols_fit(const std::vector<TraceSample>& samples, int first, int last) {
  double n = 0.0, st = 0.0, sr = 0.0, stt = 0.0, str = 0.0;
  for (int i = first; i <= last; ++i) {
    double t = samples[i].t;
    double r = *samples[i].reading;
    n += 1.0;
    st += t;
    sr += r;
    stt += t * t;
    str += t * r;
  }
  double denom = n * stt - st * st;
  if (denom == 0.0) return Fit{0.0, sr / n};
  double slope = (n * str - st * sr) / denom;
  return Fit{slope, (sr - slope * st) / n};
}

}  // namespace

std::vector<Segment> segment_trace(const std::vector<TraceSample>& samples,
                                   const SegmentationConfig& config) {
  std::vector<Segment> out;
  if (samples.empty()) return out;
  const double dt = config.report_period;
  const double epoch_tol = 0.5 * dt;

  // Maximal runs of strictly positive readings on consecutive epochs.
  std::vector<Run> runs;
  Run current;
  current.before = Run::Neighbor::kTraceEdge;
  auto close_run = [&](Run::Neighbor after, double t_after) {
    if (!current.idx.empty()) {
      current.after = after;
      current.t_after = t_after;
      runs.push_back(current);
    }
    current = Run{};
  };
  double prev_t = samples.front().t - dt;
  for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
    const TraceSample& s = samples[i];
    bool gap = s.t - prev_t > dt + epoch_tol;
    if (gap) close_run(Run::Neighbor::kEmpty, prev_t + dt);
    bool positive = s.reading && *s.reading > config.zero_tol;
    if (positive) {
      if (current.idx.empty()) {
        if (i == 0 && !gap) {
          current.before = Run::Neighbor::kTraceEdge;
        } else if (gap || !samples[i - 1].reading.has_value() ||
                   samples[i - 1].t < s.t - dt - epoch_tol) {
          current.before = Run::Neighbor::kEmpty;
        } else if (*samples[i - 1].reading <= config.zero_tol) {
          current.before = Run::Neighbor::kZero;
        } else {
          current.before = Run::Neighbor::kEmpty;
        }
        current.t_before = s.t - dt;
      }
      current.idx.push_back(i);
    } else {
      close_run(s.reading.has_value() && *s.reading <= config.zero_tol
                    ? Run::Neighbor::kZero
                    : Run::Neighbor::kEmpty,
                s.t);
    }
    prev_t = s.t;
  }
  close_run(Run::Neighbor::kTraceEdge, prev_t + dt);

  if (config.merge_lost_gaps && runs.size() > 1) {
    std::vector<Run> merged;
    merged.push_back(runs.front());
    for (std::size_t i = 1; i < runs.size(); ++i) {
      Run& prev = merged.back();
      const Run& next = runs[i];
      bool single_gap = samples[next.idx.front()].t - samples[prev.idx.back()].t <=
                        2.0 * dt + epoch_tol;
      if (single_gap && prev.after == Run::Neighbor::kEmpty &&
          next.before == Run::Neighbor::kEmpty && prev.idx.size() >= 2 &&
          next.idx.size() >= 2) {
        double m_prev = (*samples[prev.idx.back()].reading -
                         *samples[prev.idx[prev.idx.size() - 2]].reading) / dt;
        double predicted = *samples[prev.idx.back()].reading +
                           m_prev * (samples[next.idx.front()].t - samples[prev.idx.back()].t);
        if (std::abs(predicted - *samples[next.idx.front()].reading) <=
            config.jump_factor * dt * (config.v + std::abs(m_prev))) {
          for (int id : next.idx) prev.idx.push_back(id);
          prev.after = next.after;
          prev.t_after = next.t_after;
          continue;
        }
      }
      merged.push_back(next);
    }
    runs = std::move(merged);
  }

  const int n_total = static_cast<int>(samples.size());
  (void)n_total;
  int k_counter = 0;
  for (const Run& run : runs) {
    const auto& idx = run.idx;
    const int len = static_cast<int>(idx.size());

    // Local slopes between consecutive samples of the run.
    std::vector<double> m(static_cast<std::size_t>(std::max(0, len - 1)));
    for (int i = 0; i + 1 < len; ++i) {
      m[i] = (*samples[idx[i + 1]].reading - *samples[idx[i]].reading) / dt;
    }

    struct Cut {
      int last;  // run-local index of the last sample of the piece
      SegmentEvent kind;  // event at the boundary after `last`
    };
    std::vector<Cut> cuts;
    int piece_begin = 0;
    for (int i = 0; i + 1 < len; ++i) {
      double m_ref = (i > piece_begin) ? m[i - 1] : ((i + 2 < len) ? m[i + 1] : 0.0);
      double jump_thr = config.jump_factor * dt * (config.v + std::abs(m_ref));
      double dr = *samples[idx[i + 1]].reading - *samples[idx[i]].reading;
      if (std::abs(dr) > jump_thr) {
        cuts.push_back(Cut{i, dr < 0.0 ? SegmentEvent::kJumpDown : SegmentEvent::kJumpUp});
        piece_begin = i + 1;
        continue;
      }
      if (i > piece_begin &&
          std::abs(m[i] - m[i - 1]) > config.slope_threshold * config.v) {
        cuts.push_back(Cut{i, SegmentEvent::kSlopeChange});
        piece_begin = i + 1;
      }
    }

    auto boundary_run_event = [&](const Fit& fit, bool at_start) -> SegmentEvent {
      Run::Neighbor nb = at_start ? run.before : run.after;
      double t_nb = at_start ? run.t_before : run.t_after;
      switch (nb) {
        case Run::Neighbor::kTraceEdge:
          return SegmentEvent::kTraceEdge;
        case Run::Neighbor::kZero:
          return SegmentEvent::kZeroContact;
        case Run::Neighbor::kEmpty: {
          // The reading next door was absent: decide between genuine edge
          // appearance and range saturation by extrapolating the fit.
          double extrapolated = fit.intercept + fit.slope * t_nb;
          if (extrapolated >= config.r_max) return SegmentEvent::kRangeBoundary;
          return at_start ? SegmentEvent::kFromEmptyBelowMax : SegmentEvent::kToEmptyBelowMax;
        }
      }
      return SegmentEvent::kTraceEdge;
    };

    int begin = 0;
    SegmentEvent pending_start = boundary_run_event(Fit{}, true);  // refined below
    bool start_from_run = true;
    for (std::size_t c = 0; c <= cuts.size(); ++c) {
      int end = (c < cuts.size()) ? cuts[c].last : len - 1;
      int first = idx[begin];
      int last = idx[end];
      int n = end - begin + 1;
      if (n >= config.min_support) {
        Fit fit = ols_fit(samples, first, last);
        Segment seg;
        seg.sensor_id = samples[first].sensor_id;
        seg.k = k_counter;
        seg.first_idx = first;
        seg.last_idx = last;
        seg.n_samples = n;
        seg.s_d = fit.slope;
        seg.intercept = fit.intercept;
        if (config.ld_convention == LdConvention::kSpanPlusDt) {
          seg.t_s = samples[first].t - 0.5 * dt;
          seg.t_e = samples[last].t + 0.5 * dt;
        } else {
          seg.t_s = samples[first].t;
          seg.t_e = samples[last].t;
        }
        seg.l_d = seg.t_e - seg.t_s;
        seg.start_event = start_from_run ? boundary_run_event(fit, true) : pending_start;
        seg.end_event = (c < cuts.size()) ? cuts[c].kind : boundary_run_event(fit, false);
        out.push_back(seg);
        ++k_counter;
      }
      if (c < cuts.size()) {
        pending_start = cuts[c].kind;
        start_from_run = false;
        begin = end + 1;
      }
    }
  }
  return out;
}

std::vector<Segment> segments_from_analytic(const AnalyticTrace& trace, int sensor_id) {
  std::vector<Segment> out;
  out.reserve(trace.pieces.size());
  int k = 0;
  for (const TracePiece& piece : trace.pieces) {
    Segment seg;
    seg.sensor_id = sensor_id;
    seg.k = k++;
    seg.t_s = piece.t_begin;
    seg.t_e = piece.t_end;
    seg.l_d = piece.t_end - piece.t_begin;
    seg.s_d = piece.slope();
    seg.intercept = piece.r_begin - seg.s_d * piece.t_begin;
    seg.start_event = piece.start_event;
    seg.end_event = piece.end_event;
    seg.first_idx = seg.last_idx = -1;
    seg.n_samples = 0;
    out.push_back(seg);
  }
  return out;
}

namespace {

bool whole_edge_start(SegmentEvent e) {
  return e == SegmentEvent::kSlopeChange || e == SegmentEvent::kJumpDown ||
         e == SegmentEvent::kFromEmptyBelowMax;
}

bool whole_edge_end(SegmentEvent e) {
  return e == SegmentEvent::kSlopeChange || e == SegmentEvent::kJumpUp ||
         e == SegmentEvent::kToEmptyBelowMax;
}

bool is_whole_edge(const Segment& s) {
  return whole_edge_start(s.start_event) && whole_edge_end(s.end_event);
}

// Segments adjoin directly when they share a sample boundary (sampled case)
// or an exact breakpoint (analytic case).
bool adjoining(const Segment& a, const Segment& b) {
  if (a.sensor_id != b.sensor_id) return false;
  if (a.first_idx >= 0) return b.first_idx == a.last_idx + 1;
  return std::abs(b.t_s - a.t_e) <= 1e-9 * std::max(1.0, std::abs(a.t_e));
}

}  // namespace

std::vector<WholeEdgeObservation> extract_whole_edge_observations(
    const std::vector<Segment>& segments) {
  std::vector<WholeEdgeObservation> out;
  for (const Segment& s : segments) {
    if (is_whole_edge(s)) out.push_back(WholeEdgeObservation{s.sensor_id, s.k, s.l_d, s.s_d});
  }
  return out;
}

std::vector<VertexObservation> extract_vertex_observations(
    const std::vector<Segment>& segments) {
  std::vector<VertexObservation> out;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    const Segment& a = segments[i];
    const Segment& b = segments[i + 1];
    if (a.end_event == SegmentEvent::kSlopeChange &&
        b.start_event == SegmentEvent::kSlopeChange && adjoining(a, b)) {
      out.push_back(VertexObservation{a.sensor_id, a.k, a.s_d, b.s_d});
    }
  }
  return out;
}

std::vector<AdjacencyObservation> extract_adjacency_observations(
    const std::vector<Segment>& segments) {
  std::vector<AdjacencyObservation> out;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    const Segment& a = segments[i];
    const Segment& b = segments[i + 1];
    if (a.end_event == SegmentEvent::kSlopeChange &&
        b.start_event == SegmentEvent::kSlopeChange && adjoining(a, b) &&
        is_whole_edge(a) && is_whole_edge(b)) {
      out.push_back(AdjacencyObservation{a.sensor_id, a.k, b.k});
    }
  }
  return out;
}

double apply_slope_noise(double s_d, double epsilon_s, std::mt19937_64& rng) {
  if (epsilon_s <= 0.0) return s_d;
  std::normal_distribution<double> noise(0.0, epsilon_s);
  return std::tan(std::atan(s_d) + noise(rng));
}

ObservationSet analyze_traces(const std::vector<std::vector<TraceSample>>& traces,
                              const SegmentationConfig& config, double epsilon_s,
                              std::uint64_t noise_seed) {
  ObservationSet set;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (traces[i].empty()) continue;
    std::vector<Segment> segments = segment_trace(traces[i], config);
    if (epsilon_s > 0.0) {
      auto rng = substream(noise_seed ^ 0x5e5e5e5eULL,
                           static_cast<std::uint64_t>(traces[i].front().sensor_id));
      for (Segment& s : segments) s.s_d = apply_slope_noise(s.s_d, epsilon_s, rng);
    }
    auto edges = extract_whole_edge_observations(segments);
    auto vertices = extract_vertex_observations(segments);
    auto adjacencies = extract_adjacency_observations(segments);
    set.edges.insert(set.edges.end(), edges.begin(), edges.end());
    set.vertices.insert(set.vertices.end(), vertices.begin(), vertices.end());
    set.adjacencies.insert(set.adjacencies.end(), adjacencies.begin(), adjacencies.end());
  }
  return set;
}

}  // namespace traceshape
