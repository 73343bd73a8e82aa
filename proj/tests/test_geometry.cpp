#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "traceshape/geometry.hpp"

using namespace traceshape;

TEST_SUITE("geometry") {

TEST_CASE("directed edge derives length and direction") {
  auto e = DirectedEdge::between(Point(1, 1), Point(4, 5));
  CHECK(e.lambda == doctest::Approx(5.0));
  CHECK(e.xi == doctest::Approx(std::atan2(4.0, 3.0)));
  CHECK_THROWS_AS(DirectedEdge::between(Point(1, 1), Point(1, 1)), std::invalid_argument);
}

TEST_CASE("polygon validation") {
  CHECK_NOTHROW(oracles::unit_square());
  CHECK_NOTHROW(oracles::beveled_square());
  CHECK_NOTHROW(oracles::s_octagon());

  // Clockwise input rejected.
  CHECK_THROWS_AS(PolygonTarget::from_vertices(
                      {Point(0, 0), Point(0, 1), Point(1, 1), Point(1, 0)}),
                  std::invalid_argument);
  // Collinear (straight vertex) rejected.
  CHECK_THROWS_AS(PolygonTarget::from_vertices(
                      {Point(0, 0), Point(1, 0), Point(2, 0), Point(1, 1)}),
                  std::invalid_argument);
  // Self-intersecting bow tie rejected.
  CHECK_THROWS_AS(PolygonTarget::from_vertices(
                      {Point(0, 0), Point(1, 1), Point(1, 0), Point(0, 1)}),
                  std::invalid_argument);
}

TEST_CASE("exterior angles close to one turn for every valid polygon") {
  for (const auto& poly : {oracles::unit_square(), oracles::right_triangle(),
                           oracles::beveled_square(), oracles::s_octagon(),
                           oracles::ell_shape()}) {
    double ext = 0.0;
    for (int j = 0; j < poly.edge_count(); ++j) ext += kPi - poly.inner_angle_at(j);
    CHECK(ext == doctest::Approx(kTwoPi).epsilon(1e-12));
  }
}

TEST_CASE("s_octagon has the advertised edge and angle multisets") {
  auto poly = oracles::s_octagon();
  int n50 = 0, n30 = 0, convex = 0, reflex = 0;
  for (int j = 0; j < poly.edge_count(); ++j) {
    double l = poly.edges()[j].lambda;
    if (l == doctest::Approx(50.0)) ++n50;
    if (l == doctest::Approx(30.0)) ++n30;
    double g = poly.inner_angle_at(j);
    if (g == doctest::Approx(kPi / 2.0)) ++convex;
    if (g == doctest::Approx(3.0 * kPi / 2.0)) ++reflex;
  }
  CHECK(n50 == 6);
  CHECK(n30 == 2);
  CHECK(convex == 6);
  CHECK(reflex == 2);
}

TEST_CASE("ray_cast basics on the unit square") {
  auto square = oracles::unit_square();
  auto r = ray_cast(Point(-1.0, 0.5), 0.0, square);
  REQUIRE(r.has_value());
  CHECK(*r == doctest::Approx(1.0));

  auto inside = ray_cast(Point(0.5, 0.5), 1.234, square);
  REQUIRE(inside.has_value());
  CHECK(*inside == 0.0);

  auto boundary = ray_cast(Point(1.0, 0.5), 0.0, square);
  REQUIRE(boundary.has_value());
  CHECK(*boundary == 0.0);

  CHECK_FALSE(ray_cast(Point(2.0, 2.0), 0.0, square).has_value());
}

TEST_CASE("ray_cast reports the nearest edge") {
  auto square = oracles::unit_square();
  auto hit = ray_cast_detailed(Point(0.5, -1.0), kPi / 2.0, square);
  REQUIRE(hit.has_value());
  CHECK(hit->edge == 0);
  CHECK(hit->distance == doctest::Approx(1.0));
}

TEST_CASE("detection region examples") {
  // Square with bottom edge (0,0)->(1,0); beam pointing up means sensors
  // below can see it.
  auto square = oracles::unit_square();
  CHECK(detection_region_contains(Point(0.5, -0.5), kPi / 2.0, 1.0, 0, square));
  CHECK_FALSE(detection_region_contains(Point(0.5, -2.0), kPi / 2.0, 1.0, 0, square));
  CHECK_FALSE(detection_region_contains(Point(2.0, -0.5), kPi / 2.0, 1.0, 0, square));
}

TEST_CASE("parallelogram region agrees with ray casting") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double r_max = 60.0;
  for (const auto& poly : {oracles::centered_square(50.0), oracles::beveled_square(),
                           oracles::s_octagon(), oracles::ell_shape()}) {
    int checked = 0;
    int contained = 0;
    for (int i = 0; i < 10000; ++i) {
      Point sensor(240.0 * u01(rng) - 120.0, 240.0 * u01(rng) - 120.0);
      double beam = kTwoPi * u01(rng);
      auto hit = ray_cast_detailed(sensor, beam, poly);
      bool seen_within = hit && hit->edge >= 0 && hit->distance <= r_max;
      for (int j = 0; j < poly.edge_count(); ++j) {
        bool in_region = detection_region_contains(sensor, beam, r_max, j, poly);
        bool rays_say = seen_within && hit->edge == j && hit->distance > 0.0;
        CHECK(in_region == rays_say);
        ++checked;
        contained += in_region;
      }
    }
    CHECK(checked >= 10000);
    CHECK(contained > 0);  // the comparison is not vacuous
  }
}

}  // TEST_SUITE
