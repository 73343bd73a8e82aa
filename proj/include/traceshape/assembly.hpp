#pragma once

#include <string>
#include <utility>
#include <vector>

#include "traceshape/estimator.hpp"

namespace traceshape {

/// One assembled reading of the class data: a cyclic sequence of edge
/// lengths with the inner angle following each edge.
struct ShapeEstimate {
  struct Item {
    double lambda;
    double gamma;
    int length_class;
    int angle_class;
  };
  std::vector<Item> cycle;
  double closure_residual = 0.0;
  double angle_residual = 0.0;
  double score = 0.0;

  double perimeter() const;
  /// Vertices of the assembled polygon, starting at the origin with the
  /// first edge along the reference direction (pose is not recoverable).
  std::vector<Point> realize() const;
};

struct AssemblyConfig {
  double angle_residual_tol = 0.05;  // radians
  double closure_fraction_tol = 0.02;  // of the perimeter
  int max_edges = 12;
};

struct AssemblyResult {
  std::vector<ShapeEstimate> shapes;  // best first
  std::string failure;                // non-empty when shapes is empty
};

/// Residuals of a candidate cycle: Euclidean closure gap and the deviation
/// of the exterior-angle sum from one full turn.
std::pair<double, double> closure_check(const std::vector<std::pair<double, double>>& cycle);

/// Arrange the estimated edge multiset into closed polygons consistent with
/// the vertex hypotheses and adjacency judgments.
AssemblyResult assemble(const EstimationResult& estimate, const AssemblyConfig& config = {});

/// Minimal SVG rendering of an assembled shape, optionally with a
/// ground-truth outline aligned by the best rigid fit.
std::string render_svg(const ShapeEstimate& shape, const PolygonTarget* truth = nullptr);
std::string render_svg(const PolygonTarget& polygon);
std::string render_svg_placeholder(const std::string& message);

}  // namespace traceshape
