#include "traceshape/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace traceshape {

namespace {

constexpr double kVertexTol = 1e-9;

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  Point d = b - a;
  double len2 = d.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  auto orient = [](const Point& p, const Point& q, const Point& r) {
    double v = cross2(q - p, r - p);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  auto on_segment = [](const Point& p, const Point& q, const Point& r) {
    return std::min(p.x(), r.x()) - 1e-12 <= q.x() && q.x() <= std::max(p.x(), r.x()) + 1e-12 &&
           std::min(p.y(), r.y()) - 1e-12 <= q.y() && q.y() <= std::max(p.y(), r.y()) + 1e-12;
  };
  if (o1 == 0 && on_segment(a, c, b)) return true;
  if (o2 == 0 && on_segment(a, d, b)) return true;
  if (o3 == 0 && on_segment(c, a, d)) return true;
  if (o4 == 0 && on_segment(c, b, d)) return true;
  return false;
}

}  // namespace

DirectedEdge DirectedEdge::between(const Point& tail, const Point& head) {
  DirectedEdge e;
  e.tail = tail;
  e.head = head;
  Point d = head - tail;
  e.lambda = d.norm();
  if (e.lambda < 1e-12) throw std::invalid_argument("DirectedEdge: zero-length edge");
  e.xi = modone(std::atan2(d.y(), d.x()));
  return e;
}

PolygonTarget PolygonTarget::from_vertices(const std::vector<Point>& vertices) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw std::invalid_argument("PolygonTarget: need at least 3 vertices");

  double area2 = 0.0;
  for (int i = 0; i < n; ++i) {
    area2 += cross2(vertices[i], vertices[(i + 1) % n]);
  }
  if (area2 <= 0.0) {
    throw std::invalid_argument("PolygonTarget: vertices must be counterclockwise");
  }

  std::vector<DirectedEdge> edges;
  edges.reserve(n);
  for (int i = 0; i < n; ++i) {
    edges.push_back(DirectedEdge::between(vertices[i], vertices[(i + 1) % n]));
  }

  // Deviation from pi at each vertex and exterior-angle closure.
  double ext_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = inner_angle(edges[i].xi, edges[(i + 1) % n].xi);  // throws if degenerate
    ext_sum += kPi - g;
  }
  if (std::abs(ext_sum - kTwoPi) > kVertexTol) {
    throw std::invalid_argument("PolygonTarget: exterior angles do not close to 2*pi");
  }

  // Simplicity: non-adjacent edges must not intersect.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(edges[i].tail, edges[i].head, edges[j].tail, edges[j].head)) {
        throw std::invalid_argument("PolygonTarget: boundary is self-intersecting");
      }
    }
  }
  return PolygonTarget(std::move(edges));
}

double PolygonTarget::inner_angle_at(int j) const {
  const int n = edge_count();
  return inner_angle(edges_[j % n].xi, edges_[(j + 1) % n].xi);
}

bool PolygonTarget::contains(const Point& p) const {
  for (const auto& e : edges_) {
    if (point_segment_distance(p, e.tail, e.head) <= kVertexTol) return true;
  }
  bool inside = false;
  for (const auto& e : edges_) {
    const Point& a = e.tail;
    const Point& b = e.head;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      double x_int = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x_int) inside = !inside;
    }
  }
  return inside;
}

std::vector<Point> PolygonTarget::vertices() const {
  std::vector<Point> v;
  v.reserve(edges_.size());
  for (const auto& e : edges_) v.push_back(e.tail);
  return v;
}

PolygonTarget PolygonTarget::scaled(double factor) const {
  std::vector<Point> v = vertices();
  for (auto& p : v) p *= factor;
  return from_vertices(v);
}

PolygonTarget PolygonTarget::rotated(double angle) const {
  Eigen::Rotation2D<double> rot(angle);
  std::vector<Point> v = vertices();
  for (auto& p : v) p = rot * p;
  return from_vertices(v);
}

PolygonTarget PolygonTarget::translated(const Point& delta) const {
  std::vector<Point> v = vertices();
  for (auto& p : v) p += delta;
  return from_vertices(v);
}

std::optional<RaySegmentHit> ray_hit_segment(const Point& origin, const Point& dir,
                                             const Point& a, const Point& b) {
  Point e = b - a;
  double denom = cross2(dir, e);
  Point ao = a - origin;
  if (std::abs(denom) < 1e-15) {
    // Collinear grazing: report the nearest endpoint ahead of the ray.
    if (std::abs(cross2(ao, dir)) > 1e-9) return std::nullopt;
    double ra = ao.dot(dir);
    double rb = (b - origin).dot(dir);
    double r = std::numeric_limits<double>::infinity();
    double s = 0.0;
    if (ra >= 0.0 && ra < r) { r = ra; s = 0.0; }
    if (rb >= 0.0 && rb < r) { r = rb; s = 1.0; }
    if (ra < 0.0 && rb > 0.0) { r = 0.0; s = -ra / (rb - ra); }
    if (rb < 0.0 && ra > 0.0) { r = 0.0; s = -rb / (ra - rb); }
    if (!std::isfinite(r)) return std::nullopt;
    return RaySegmentHit{r, s};
  }
  double r = cross2(ao, e) / denom;
  double s = cross2(ao, dir) / denom;
  if (r < 0.0 || s < 0.0 || s > 1.0) return std::nullopt;
  return RaySegmentHit{r, s};
}

std::optional<RayHit> ray_cast_detailed(const Point& origin, double direction,
                                        const PolygonTarget& polygon) {
  if (polygon.contains(origin)) return RayHit{0.0, -1};
  Point dir = unit(direction);
  std::optional<RayHit> best;
  const auto& edges = polygon.edges();
  for (int j = 0; j < static_cast<int>(edges.size()); ++j) {
    auto hit = ray_hit_segment(origin, dir, edges[j].tail, edges[j].head);
    if (!hit) continue;
    if (!best || hit->distance < best->distance) best = RayHit{hit->distance, j};
  }
  return best;
}

bool detection_region_contains(const Point& sensor, double beam_direction, double r_max,
                               int edge_index, const PolygonTarget& polygon) {
  const DirectedEdge& edge = polygon.edges()[edge_index];
  Point b = unit(beam_direction);
  Point e = edge.head - edge.tail;
  double denom = cross2(unit(edge.xi), b);
  if (std::abs(denom) < 1e-12) return false;  // beam parallel to the edge

  // sensor = tail + s * e - r * b with s in [0, 1], r in [0, r_max].
  Point d = sensor - edge.tail;
  double s = cross2(d, b) / cross2(e, b);
  double r = -cross2(d, e) / cross2(b, e);
  if (s < 0.0 || s > 1.0 || r < 0.0 || r > r_max) return false;

  if (polygon.contains(sensor)) return false;

  // Blocked if any other edge is hit strictly before the footprint.
  Point dir = b;
  const auto& edges = polygon.edges();
  for (int j = 0; j < static_cast<int>(edges.size()); ++j) {
    if (j == edge_index) continue;
    auto hit = ray_hit_segment(sensor, dir, edges[j].tail, edges[j].head);
    if (hit && hit->distance < r - 1e-9) return false;
  }
  return true;
}

}  // namespace traceshape
