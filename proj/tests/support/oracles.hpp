#pragma once

// Test-side oracles, kept independent of the library implementation paths
// they check.

#include <cmath>
#include <functional>
#include <vector>

#include "traceshape/angles.hpp"
#include "traceshape/geometry.hpp"

namespace oracles {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  if (b <= a) return 0.0;
  // Pre-split at multiples of pi/2 where |sin| and the clamp kink.
  std::vector<double> knots{a};
  double k = std::ceil(a / (traceshape::kPi / 2.0)) * (traceshape::kPi / 2.0);
  for (; k < b; k += traceshape::kPi / 2.0) {
    if (k > knots.back() + 1e-12) knots.push_back(k);
  }
  knots.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double lo = knots[i], hi = knots[i + 1], mid = 0.5 * (lo + hi);
    total += adaptive_simpson(f, lo, hi, f(lo), f(mid), f(hi), tol, 48);
  }
  return total;
}

/// Direction-measure of unblocked whole-edge placements: the integral the
/// blocking closed form must reproduce, evaluated by quadrature over the
/// beam-window with the strip width clamped at zero.
inline double blocking_measure_by_quadrature(double lambda, double theta, double delta_xi,
                                             double r_max) {
  double s = r_max * std::abs(std::sin(theta));
  auto integrand = [&](double x) { return std::max(0.0, s - lambda * std::abs(std::sin(x))); };
  return integrate(integrand, delta_xi - theta, traceshape::kPi - theta, 1e-13);
}

/// Same quadrature for the unblocked (whole-window) strip measure.
inline double edge_measure_by_quadrature(double lambda, double theta, double r_max) {
  double s = r_max * std::abs(std::sin(theta));
  auto integrand = [&](double x) { return std::max(0.0, s - lambda * std::abs(std::sin(x))); };
  return integrate(integrand, -theta, traceshape::kPi - theta, 1e-13);
}

// Shared test polygons.

inline traceshape::PolygonTarget unit_square() {
  using traceshape::Point;
  return traceshape::PolygonTarget::from_vertices(
      {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)});
}

inline traceshape::PolygonTarget centered_square(double half) {
  using traceshape::Point;
  return traceshape::PolygonTarget::from_vertices({Point(-half, -half), Point(half, -half),
                                                   Point(half, half), Point(-half, half)});
}

/// Right triangle with legs 50*sqrt(3) and 50 (hypotenuse 100), centered.
inline traceshape::PolygonTarget right_triangle() {
  using traceshape::Point;
  double a = 50.0 * std::sqrt(3.0);
  Point shift(-a / 3.0, -50.0 / 3.0);
  return traceshape::PolygonTarget::from_vertices(
      {Point(0, 0) + shift, Point(a, 0) + shift, Point(0, 50) + shift});
}

/// Pentagon: a 100 x 100 square with one corner beveled by the diagonal,
/// edges (100, 25, 75*sqrt(2), 25, 100), angles (pi/2, 3pi/4, 3pi/4, pi/2,
/// pi/2). Centered near the origin.
inline traceshape::PolygonTarget beveled_square() {
  using traceshape::Point;
  Point shift(-50, -50);
  return traceshape::PolygonTarget::from_vertices({Point(0, 0) + shift, Point(100, 0) + shift,
                                                   Point(100, 25) + shift, Point(25, 100) + shift,
                                                   Point(0, 100) + shift});
}

/// S-shaped octagon: six edges of 50, two of 30, two reflex (3pi/2) corners.
inline traceshape::PolygonTarget s_octagon() {
  using traceshape::Point;
  Point shift(-40, -50);
  return traceshape::PolygonTarget::from_vertices(
      {Point(0, 0) + shift, Point(50, 0) + shift, Point(50, 50) + shift, Point(80, 50) + shift,
       Point(80, 100) + shift, Point(30, 100) + shift, Point(30, 50) + shift,
       Point(0, 50) + shift});
}

/// L-shape with a reflex corner at the origin (arms 50, reflex vertex index 3).
inline traceshape::PolygonTarget ell_shape() {
  using traceshape::Point;
  return traceshape::PolygonTarget::from_vertices({Point(-50, -50), Point(50, -50), Point(50, 0),
                                                   Point(0, 0), Point(0, 50), Point(-50, 50)});
}

}  // namespace oracles
