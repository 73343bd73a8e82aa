#include "traceshape/validation.hpp"

#include <cmath>
#include <sstream>

#include "traceshape/rng.hpp"
#include "traceshape/sensing.hpp"

namespace traceshape {

namespace {

McEstimate finish(long hits, long samples) {
  McEstimate e;
  e.hits = hits;
  e.samples = samples;
  e.fraction = samples > 0 ? static_cast<double>(hits) / samples : 0.0;
  e.sigma = samples > 0 ? std::sqrt(std::max(e.fraction * (1.0 - e.fraction), 1e-12) /
                                    static_cast<double>(samples))
                        : 0.0;
  return e;
}

// Reading at the instant the beam ray passes through point `target`:
// perpendicular line-to-point distance divided by |sin theta|, signed so
// that negative values mean the point is behind the beam.
double crossing_range(const LinePlacement& line, double theta, const Point& target) {
  Point u_phi = unit(line.phi);
  Point n(-std::sin(line.phi), std::cos(line.phi));
  Point c = line.offset * n;
  double sin_theta = std::sin(theta);
  return cross2(u_phi, target - c) / sin_theta;
}

}  // namespace

McEstimate mc_whole_edge_fraction(double lambda, double theta, double omega_radius,
                                  double r_max, long samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("mc_whole_edge_fraction: need samples > 0");
  auto rng = substream(seed, 0xED6E);
  const double xi = 0.0;  // the monitor measure is isotropic
  const Point a(-lambda / 2.0, 0.0);
  const Point b(lambda / 2.0, 0.0);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    LinePlacement line = sample_line(rng, LineMode::kMonitorOmega, omega_radius, r_max, theta);
    double beam = line.phi + theta;
    if (modone(beam - xi) > kPi) continue;  // approaches the back face
    double ra = crossing_range(line, theta, a);
    double rb = crossing_range(line, theta, b);
    if (ra > 0.0 && ra <= r_max && rb > 0.0 && rb <= r_max) ++hits;
  }
  return finish(hits, samples);
}

McEstimate mc_vertex_fraction(const PolygonTarget& polygon, int vertex_index, double theta,
                              double omega_radius, double r_max, long samples,
                              std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("mc_vertex_fraction: need samples > 0");
  auto rng = substream(seed, 0x7E27);
  const Point vertex = polygon.edges()[vertex_index].tail;
  const double sin_theta = std::sin(theta);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    LinePlacement line = sample_line(rng, LineMode::kMonitorOmega, omega_radius, r_max, theta);
    if (sin_theta == 0.0) continue;
    double r_v = crossing_range(line, theta, vertex);
    if (r_v <= 0.0 || r_v > r_max) continue;
    // Position of the sensor when its beam line passes through the vertex.
    double beam = line.phi + theta;
    Point sensor = vertex - r_v * unit(beam);
    auto hit = ray_cast_detailed(sensor, beam, polygon);
    if (!hit || hit->edge < 0) continue;
    if (hit->distance >= r_v - 1e-9 * std::max(1.0, r_v)) ++hits;
  }
  return finish(hits, samples);
}

McEstimate mc_whole_edge_concave_fraction(double lambda, double theta, double delta_xi,
                                          double omega_radius, double r_max, long samples,
                                          std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("mc concave: need samples > 0");
  auto rng = substream(seed, 0xC0CA);
  const double xi = 0.0;
  const double xi_prev = modone(xi + delta_xi);
  const Point a(-lambda / 2.0, 0.0);
  const Point b(lambda / 2.0, 0.0);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    LinePlacement line = sample_line(rng, LineMode::kMonitorOmega, omega_radius, r_max, theta);
    double beam_dir = line.phi + theta;
    if (modone(beam_dir - xi) > kPi) continue;
    double ra = crossing_range(line, theta, a);
    double rb = crossing_range(line, theta, b);
    if (!(ra > 0.0 && ra <= r_max && rb > 0.0 && rb <= r_max)) continue;
    // Not blocked by the predecessor across the concave vertex: the beam
    // must point strictly past its direction.
    double w = modone(beam_dir - xi_prev);
    if (w <= 0.0 || w > kPi - delta_xi) continue;
    ++hits;
  }
  return finish(hits, samples);
}

std::vector<ProbCurvePoint> probability_curve(double lambda, double gamma, double omega_radius,
                                              double r_max, int grid_points, long samples,
                                              std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("probability_curve: need samples > 0");
  // Convex corner from a square, reflex corner from an L-shape, both scaled
  // so the wedge around the tested vertex is unobstructed within r_max.
  PolygonTarget square = PolygonTarget::from_vertices(
      {Point(-50, -50), Point(50, -50), Point(50, 50), Point(-50, 50)});
  PolygonTarget ell = PolygonTarget::from_vertices({Point(-50, -50), Point(50, -50),
                                                    Point(50, 0), Point(0, 0), Point(0, 50),
                                                    Point(-50, 50)});
  const bool reflex = gamma > kPi;
  const PolygonTarget& poly = reflex ? ell : square;
  const int vertex_index = reflex ? 3 : 2;

  ArenaParams arena{kTwoPi * omega_radius, r_max};
  std::vector<ProbCurvePoint> out;
  for (int i = 0; i < grid_points; ++i) {
    double theta = kPi * (static_cast<double>(i) + 0.5) / grid_points;
    ProbCurvePoint p;
    p.theta = theta;
    p.q_edge_formula = q_d_edge(lambda, theta, arena);
    auto edge_mc = mc_whole_edge_fraction(lambda, theta, omega_radius, r_max, samples,
                                          seed + static_cast<std::uint64_t>(i));
    p.q_edge_mc = edge_mc.fraction;
    p.q_edge_sigma = edge_mc.sigma;
    p.q_vertex_formula = q_d_vertex(gamma, theta, arena);
    auto vtx_mc = mc_vertex_fraction(poly, vertex_index, theta, omega_radius, r_max, samples,
                                     seed + 1000 + static_cast<std::uint64_t>(i));
    p.q_vertex_mc = vtx_mc.fraction;
    p.q_vertex_sigma = vtx_mc.sigma;
    p.within_3sigma = std::abs(p.q_edge_mc - p.q_edge_formula) <= 3.0 * p.q_edge_sigma &&
                      std::abs(p.q_vertex_mc - p.q_vertex_formula) <= 3.0 * p.q_vertex_sigma;
    out.push_back(p);
  }
  return out;
}

std::string probability_curve_csv(const std::vector<ProbCurvePoint>& curve) {
  std::ostringstream os;
  os.precision(10);
  os << "theta,q_edge_formula,q_edge_mc,q_edge_sigma,q_vertex_formula,q_vertex_mc,"
        "q_vertex_sigma,within_3sigma\n";
  for (const auto& p : curve) {
    os << p.theta << ',' << p.q_edge_formula << ',' << p.q_edge_mc << ',' << p.q_edge_sigma
       << ',' << p.q_vertex_formula << ',' << p.q_vertex_mc << ',' << p.q_vertex_sigma << ','
       << (p.within_3sigma ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string probability_curve_svg(const std::vector<ProbCurvePoint>& curve) {
  double max_q = 1e-9;
  for (const auto& p : curve) {
    max_q = std::max({max_q, p.q_edge_formula, p.q_vertex_formula, p.q_edge_mc, p.q_vertex_mc});
  }
  const double w = 480.0, h = 300.0, ml = 50.0, mb = 40.0;
  auto x_of = [&](double theta) { return ml + (w - ml - 10.0) * theta / kPi; };
  auto y_of = [&](double q) { return (h - mb) - (h - mb - 10.0) * q / max_q; };
  std::ostringstream os;
  os.precision(8);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  os << "  <line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - 10 << "\" y2=\""
     << h - mb << "\" stroke=\"black\"/>\n";
  os << "  <line x1=\"" << ml << "\" y1=\"10\" x2=\"" << ml << "\" y2=\"" << h - mb
     << "\" stroke=\"black\"/>\n";
  os << "  <text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\" font-size=\"12\">theta (0..pi)"
     << "</text>\n  <text x=\"4\" y=\"20\" font-size=\"12\">q_d (max " << max_q
     << ")</text>\n";
  auto polyline = [&](auto getter, const char* color) {
    os << "  <polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& p : curve) os << x_of(p.theta) << ',' << y_of(getter(p)) << ' ';
    os << "\"/>\n";
  };
  polyline([](const ProbCurvePoint& p) { return p.q_edge_formula; }, "#0057b8");
  polyline([](const ProbCurvePoint& p) { return p.q_vertex_formula; }, "#b85c00");
  for (const auto& p : curve) {
    os << "  <circle cx=\"" << x_of(p.theta) << "\" cy=\"" << y_of(p.q_edge_mc)
       << "\" r=\"2\" fill=\"#0057b8\"/>\n";
    os << "  <circle cx=\"" << x_of(p.theta) << "\" cy=\"" << y_of(p.q_vertex_mc)
       << "\" r=\"2\" fill=\"#b85c00\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace traceshape
