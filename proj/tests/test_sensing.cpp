#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "traceshape/rng.hpp"
#include "traceshape/sensing.hpp"

using namespace traceshape;

namespace {

Scenario base_scenario(PolygonTarget poly) {
  Scenario s{.polygon = std::move(poly)};
  s.omega_radius = 200.0;
  s.r_max = 100.0;
  s.report_period = 1.0;
  s.v = 1.0;
  s.thetas = {kPi / 2.0};
  s.seed = 1234;
  return s;
}

double expected_piece_slope(const Scenario& scenario, const SensorConfig& sensor, int edge) {
  double xi = scenario.polygon.edges()[edge].xi;
  double psi = xi - sensor.phi;
  return -sensor.v * std::sin(psi) / std::sin(psi - sensor.theta);
}

}  // namespace

TEST_SUITE("sensing") {

TEST_CASE("through-mode lines always cross the disk") {
  auto rng = substream(11, 0);
  for (int i = 0; i < 1000; ++i) {
    auto line = sample_line(rng, LineMode::kThroughOmega, 200.0, 100.0, kPi / 2.0);
    CHECK(std::abs(line.offset) <= 200.0);
  }
}

TEST_CASE("line measure: fraction meeting a half-size disk is one half") {
  auto rng = substream(12, 0);
  const long n = 100000;
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    auto line = sample_line(rng, LineMode::kThroughOmega, 200.0, 100.0, kPi / 2.0);
    if (std::abs(line.offset) <= 100.0) ++hits;
  }
  double fraction = static_cast<double>(hits) / n;
  double sigma = std::sqrt(0.25 / n);
  CHECK(std::abs(fraction - 0.5) <= 3.0 * sigma);
}

TEST_CASE("monitor-mode offset interval extends toward the sensing side") {
  auto [lo, hi] = line_offset_interval(LineMode::kMonitorOmega, 200.0, 100.0, kPi / 2.0);
  CHECK(hi - lo == doctest::Approx(500.0));
  CHECK(lo == doctest::Approx(-300.0));
  CHECK(hi == doctest::Approx(200.0));

  auto [lo2, hi2] = line_offset_interval(LineMode::kMonitorOmega, 200.0, 100.0, -kPi / 2.0);
  CHECK(lo2 == doctest::Approx(-200.0));
  CHECK(hi2 == doctest::Approx(300.0));

  auto [lo3, hi3] = line_offset_interval(LineMode::kMonitorOmega, 200.0, 100.0, kPi / 6.0);
  CHECK(hi3 - lo3 == doctest::Approx(400.0 + 100.0 * 0.5));
}

TEST_CASE("a line far from the target reports nothing") {
  Scenario s = base_scenario(oracles::centered_square(50.0));
  SensorConfig sensor;
  sensor.id = 0;
  sensor.theta = kPi / 2.0;
  sensor.v = 1.0;
  sensor.phi = 0.0;
  sensor.offset = -190.0;  // beam reaches only to -90, square starts at -50
  sensor.start = Point(-100.0, -190.0);
  sensor.duration = 200.0;
  auto rng = substream(1, 0);
  auto trace = simulate_trace(sensor, s, rng);
  CHECK(trace.size() == 201);
  for (const auto& sample : trace) CHECK_FALSE(sample.reading.has_value());
}

TEST_CASE("identical seeds give identical traces") {
  Scenario s = base_scenario(oracles::beveled_square());
  s.n_s = 50;
  s.epsilon_l = 0.01;
  auto a = simulate_all(s);
  auto b = simulate_all(s);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].size() == b[i].size());
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      CHECK(a[i][k].t == b[i][k].t);
      CHECK(a[i][k].reading.has_value() == b[i][k].reading.has_value());
      if (a[i][k].reading) CHECK(*a[i][k].reading == *b[i][k].reading);
    }
  }
}

TEST_CASE("readings never exceed the range bound") {
  Scenario s = base_scenario(oracles::s_octagon());
  s.n_s = 200;
  for (const auto& trace : simulate_all(s)) {
    for (const auto& sample : trace) {
      if (sample.reading) {
        CHECK(*sample.reading >= 0.0);
        CHECK(*sample.reading <= s.r_max);
      }
    }
  }
}

TEST_CASE("analytic trace: single-edge sweep is linear with the closed-form slope") {
  Scenario s = base_scenario(oracles::centered_square(50.0).rotated(0.2));
  SensorConfig sensor;
  sensor.id = 0;
  sensor.theta = 1.4;
  sensor.v = 1.0;
  sensor.phi = 0.1;
  sensor.offset = -75.0;
  Point n(-std::sin(sensor.phi), std::cos(sensor.phi));
  sensor.start = sensor.offset * n - 150.0 * unit(sensor.phi);
  sensor.duration = 300.0;

  auto trace = analytic_trace(sensor, s);
  REQUIRE(!trace.pieces.empty());
  for (const auto& piece : trace.pieces) {
    CHECK(piece.slope() ==
          doctest::Approx(expected_piece_slope(s, sensor, piece.edge)).epsilon(1e-9));
  }
}

TEST_CASE("analytic trace: convex corner gives two continuous pieces") {
  Scenario s = base_scenario(oracles::centered_square(50.0).rotated(0.2));
  SensorConfig sensor;
  sensor.id = 0;
  sensor.theta = kPi / 2.0;
  sensor.v = 1.0;
  sensor.phi = 0.3;
  sensor.offset = -80.0;
  Point n(-std::sin(sensor.phi), std::cos(sensor.phi));
  sensor.start = sensor.offset * n - 200.0 * unit(sensor.phi);
  sensor.duration = 400.0;

  auto trace = analytic_trace(sensor, s);
  bool found_corner = false;
  for (std::size_t i = 0; i + 1 < trace.pieces.size(); ++i) {
    const auto& a = trace.pieces[i];
    const auto& b = trace.pieces[i + 1];
    if (a.end_event == TraceEvent::kSlopeChange &&
        b.start_event == TraceEvent::kSlopeChange) {
      CHECK(a.r_end == doctest::Approx(b.r_begin).epsilon(1e-9));
      CHECK(a.slope() != doctest::Approx(b.slope()).epsilon(1e-6));
      CHECK(a.edge != b.edge);
      found_corner = true;
    }
  }
  CHECK(found_corner);
}

TEST_CASE("analytic trace: entering the target ends a piece at zero") {
  Scenario s = base_scenario(oracles::centered_square(50.0));
  SensorConfig sensor;
  sensor.id = 0;
  sensor.theta = 0.0;  // beam along the motion: reading falls at speed v
  sensor.v = 1.0;
  sensor.phi = 0.0;
  sensor.offset = 0.0;
  sensor.start = Point(-150.0, 0.0);
  sensor.duration = 300.0;

  auto trace = analytic_trace(sensor, s);
  REQUIRE(!trace.pieces.empty());
  const auto& first = trace.pieces.front();
  CHECK(first.end_event == TraceEvent::kZeroContact);
  CHECK(first.r_end == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(first.slope() == doctest::Approx(-1.0));
}

TEST_CASE("sampling the analytic trace reproduces the simulator exactly") {
  for (auto poly : {oracles::beveled_square(), oracles::s_octagon()}) {
    Scenario s = base_scenario(std::move(poly));
    s.n_s = 60;
    s.seed = 777;
    for (int i = 0; i < s.n_s; ++i) {
      auto rng = substream(s.seed, static_cast<std::uint64_t>(i));
      SensorConfig sensor = make_sensor(i, s, rng);
      auto sim = simulate_trace(sensor, s, rng);
      auto ana = analytic_trace(sensor, s);
      for (const auto& sample : sim) {
        auto value = sample_analytic(ana, sensor, s, sample.t);
        REQUIRE(value.has_value() == sample.reading.has_value());
        if (value) CHECK(*value == *sample.reading);  // bitwise
      }
    }
  }
}

}  // TEST_SUITE
