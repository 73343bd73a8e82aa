#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "traceshape/angles.hpp"

namespace traceshape {

using Point = Eigen::Vector2d;

inline Point unit(double angle) { return Point(std::cos(angle), std::sin(angle)); }

inline double cross2(const Point& a, const Point& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// One directed boundary edge. lambda and xi are derived from the endpoints
/// and kept consistent with them.
struct DirectedEdge {
  Point tail;
  Point head;
  double lambda;  // |head - tail|
  double xi;      // atan2(head - tail) in [0, 2*pi)

  static DirectedEdge between(const Point& tail, const Point& head);
};

/// Simple closed polygon, edges counted counterclockwise; the head of edge j
/// is the tail of edge j+1 (cyclically). Construction validates closure,
/// orientation, simplicity and vertex non-degeneracy.
class PolygonTarget {
 public:
  static PolygonTarget from_vertices(const std::vector<Point>& vertices);

  const std::vector<DirectedEdge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Inner angle gamma_j at the vertex between edge j and edge j+1.
  double inner_angle_at(int j) const;

  /// Closed-set membership: boundary points count as inside.
  bool contains(const Point& p) const;

  std::vector<Point> vertices() const;

  PolygonTarget scaled(double factor) const;
  PolygonTarget rotated(double angle) const;
  PolygonTarget translated(const Point& delta) const;

 private:
  explicit PolygonTarget(std::vector<DirectedEdge> edges) : edges_(std::move(edges)) {}
  std::vector<DirectedEdge> edges_;
};

/// Distance along the ray from `origin` in direction `dir` (unit vector) to
/// the segment [a, b], together with the position parameter on the segment.
struct RaySegmentHit {
  double distance;  // >= 0 along the ray
  double s;         // in [0, 1] along the segment
};
std::optional<RaySegmentHit> ray_hit_segment(const Point& origin, const Point& dir,
                                             const Point& a, const Point& b);

struct RayHit {
  double distance;  // 0 when the origin is inside or on the boundary
  int edge;         // index of the first edge hit, -1 for interior origins
};

/// First boundary hit of the ray from `origin` in direction `direction`.
/// Interior (closed-set) origins yield {0, -1}; rays that miss yield nullopt.
std::optional<RayHit> ray_cast_detailed(const Point& origin, double direction,
                                        const PolygonTarget& polygon);

inline std::optional<double> ray_cast(const Point& origin, double direction,
                                      const PolygonTarget& polygon) {
  auto hit = ray_cast_detailed(origin, direction, polygon);
  if (!hit) return std::nullopt;
  return hit->distance;
}

/// Membership in the detection region of edge `edge_index`: the parallelogram
/// spanned by the edge and the reverse beam direction with depth r_max,
/// excluding positions inside the polygon and positions whose view of the
/// edge is blocked by another edge. Used as a geometric oracle for ray_cast.
bool detection_region_contains(const Point& sensor, double beam_direction, double r_max,
                               int edge_index, const PolygonTarget& polygon);

}  // namespace traceshape
