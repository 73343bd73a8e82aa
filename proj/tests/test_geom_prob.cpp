#include <doctest.h>

#include <set>

#include "support/blocking_cases.hpp"
#include "support/oracles.hpp"
#include "traceshape/geom_prob.hpp"

using namespace traceshape;

namespace {
const ArenaParams kDisk200 = ArenaParams::disk(200.0, 100.0);
}

TEST_SUITE("geom_prob") {

TEST_CASE("eta window and saturation") {
  CHECK(eta(200.0, kPi / 2.0, 100.0) == doctest::Approx(kPi / 6.0));
  CHECK(eta(50.0, kPi / 2.0, 100.0) == doctest::Approx(kPi / 2.0));
  CHECK(eta(100.0, 0.0, 100.0) == doctest::Approx(0.0));
}

TEST_CASE("whole-edge detection probability") {
  // (100*pi - 200) / (1000*pi) and (100*pi - 100) / (1000*pi).
  CHECK(q_d_edge(100.0, kPi / 2.0, kDisk200) == doctest::Approx(0.0363380).epsilon(1e-5));
  CHECK(q_d_edge(50.0, kPi / 2.0, kDisk200) == doctest::Approx(0.0681690).epsilon(1e-5));
  CHECK(q_d_edge(123.0, 0.0, kDisk200) == 0.0);
  CHECK(q_d_edge(123.0, kPi, kDisk200) <= 1e-30);  // sin(pi) is fp noise
}

TEST_CASE("q_d_edge matches quadrature of the strip measure") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double lambda = 5.0 + 295.0 * u01(rng);
    double theta = 0.05 + (kPi - 0.1) * u01(rng);
    double expected = oracles::edge_measure_by_quadrature(lambda, theta, kDisk200.r_max) /
                      kDisk200.monitor_measure(theta);
    CHECK(q_d_edge(lambda, theta, kDisk200) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("expected detector counts are sums over sensors") {
  std::vector<double> thetas(2000, kPi / 2.0);
  CHECK(expected_detectors_edge(50.0, thetas, kDisk200) == doctest::Approx(136.338).epsilon(1e-4));
  CHECK(expected_detectors_edge(50.0, std::vector<double>{}, kDisk200) == 0.0);

  std::vector<double> mixed(1000, kPi / 2.0);
  mixed.insert(mixed.end(), 1000, kPi / 4.0);
  double expected = 1000.0 * q_d_edge(100.0, kPi / 2.0, kDisk200) +
                    1000.0 * q_d_edge(100.0, kPi / 4.0, kDisk200);
  CHECK(expected_detectors_edge(100.0, mixed, kDisk200) == doctest::Approx(expected));
}

TEST_CASE("vertex detection probability") {
  CHECK(q_d_vertex(kPi / 2.0, kPi / 2.0, kDisk200) == doctest::Approx(0.05));
  CHECK(q_d_vertex(3.0 * kPi / 2.0, kPi / 2.0, kDisk200) == doctest::Approx(0.05));
  CHECK(q_d_vertex(1e-9, kPi / 2.0, kDisk200) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK_THROWS_AS(q_d_vertex(kPi, kPi / 2.0, kDisk200), std::invalid_argument);
  CHECK_THROWS_AS(q_d_vertex(0.0, kPi / 2.0, kDisk200), std::invalid_argument);

  // Continuity across the convex/reflex branch split.
  double lo = q_d_vertex(kPi - 1e-9, 1.1, kDisk200);
  double hi = q_d_vertex(kPi + 1e-9, 1.1, kDisk200);
  CHECK(lo == doctest::Approx(hi).epsilon(1e-6));

  std::vector<double> thetas(2000, kPi / 2.0);
  CHECK(expected_detectors_vertex(kPi / 2.0, thetas, kDisk200) == doctest::Approx(100.0));
  CHECK(expected_detectors_vertex(kPi / 2.0, std::vector<double>{}, kDisk200) == 0.0);
}

TEST_CASE("blocking measure: worked example") {
  // lambda 200, theta pi/2, delta_xi pi/4: both window ends land in the wide
  // middle zone, so the measure equals the unblocked strip measure
  // 2*eta*r_max - 2*lambda*(1 - cos eta) with eta = pi/6.
  double expected = 2.0 * (kPi / 6.0) * 100.0 - 400.0 * (1.0 - std::cos(kPi / 6.0));
  CHECK(expected == doctest::Approx(51.1300).epsilon(1e-5));
  CHECK(blocking_f(200.0, kPi / 2.0, kPi / 4.0, 100.0) == doctest::Approx(expected));
  CHECK(q_d_edge_concave(200.0, kPi / 2.0, kPi / 4.0, kDisk200) ==
        doctest::Approx(51.1300 / (1000.0 * kPi)).epsilon(1e-5));

  std::vector<double> thetas(2000, kPi / 2.0);
  CHECK(expected_detectors_edge_concave(200.0, thetas, kPi / 4.0, kDisk200) ==
        doctest::Approx(2000.0 * 51.1300 / (1000.0 * kPi)).epsilon(1e-4));
  CHECK(expected_detectors_edge_concave(200.0, std::vector<double>{}, kPi / 4.0, kDisk200) ==
        0.0);
}

TEST_CASE("blocking measure: fully blocked window") {
  // Window entirely on the far side of the strip lobes.
  auto eval = blocking_f_detailed(1000.0, 3.0 * kPi / 2.0, 2.0, 100.0);
  CHECK(eval.value == 0.0);
  CHECK(oracles::blocking_measure_by_quadrature(1000.0, 3.0 * kPi / 2.0, 2.0, 100.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("blocking measure: vanishing turn recovers the plain strip measure") {
  double lambda = 200.0, theta = 3.0 * kPi / 2.0, r_max = 100.0;
  double e = eta(lambda, theta, r_max);
  double plain = 2.0 * e * r_max - 2.0 * lambda * (1.0 - std::cos(e));
  CHECK(blocking_f(lambda, theta, 1e-12, r_max) == doctest::Approx(plain).epsilon(1e-9));
  double q_plain = q_d_edge(lambda, theta, kDisk200);
  CHECK(q_d_edge_concave(lambda, theta, 1e-12, kDisk200) ==
        doctest::Approx(q_plain).epsilon(1e-9));
}

TEST_CASE("blocking closed form matches quadrature on all branches") {
  auto inputs = oracles::stratified_blocking_inputs(10000, 42);
  REQUIRE(static_cast<int>(inputs.size()) == 10000);
  std::set<int> branches;
  for (const auto& in : inputs) {
    auto eval = blocking_f_detailed(in.lambda, in.theta, in.delta_xi, in.r_max);
    double expected =
        oracles::blocking_measure_by_quadrature(in.lambda, in.theta, in.delta_xi, in.r_max);
    REQUIRE_MESSAGE(std::abs(eval.value - expected) <= 1e-9,
                    "branch " << eval.branch << " lambda " << in.lambda << " theta " << in.theta
                              << " delta_xi " << in.delta_xi << " r_max " << in.r_max
                              << " got " << eval.value << " want " << expected);
    branches.insert(eval.branch);
  }
  CHECK(static_cast<int>(branches.size()) == blocking_f_branch_count());
}

TEST_CASE("blocking never exceeds the unblocked measure") {
  auto inputs = oracles::stratified_blocking_inputs(2000, 99);
  for (const auto& in : inputs) {
    ArenaParams arena = ArenaParams::disk(200.0, in.r_max);
    double blocked = q_d_edge_concave(in.lambda, in.theta, in.delta_xi, arena);
    double plain = q_d_edge(in.lambda, in.theta, arena);
    CHECK(blocked >= 0.0);
    CHECK(blocked <= plain + 1e-12);
  }
}

TEST_CASE("q_d_edge is non-increasing in lambda and peaks at theta = pi/2") {
  double prev = 1.0;
  for (double lambda : {10.0, 20.0, 50.0, 100.0, 150.0, 250.0, 390.0}) {
    double q = q_d_edge(lambda, kPi / 2.0, kDisk200);
    CHECK(q <= prev + 1e-15);
    prev = q;
  }

  int argmax_edge = -1, argmax_vertex = -1;
  double best_edge = -1.0, best_vertex = -1.0;
  for (int i = 0; i < 64; ++i) {
    double theta = kPi * (i + 0.5) / 64.0;
    double qe = q_d_edge(50.0, theta, kDisk200);
    double qv = q_d_vertex(kPi / 2.0, theta, kDisk200);
    if (qe > best_edge) { best_edge = qe; argmax_edge = i; }
    if (qv > best_vertex) { best_vertex = qv; argmax_vertex = i; }
    // Dependence only through |sin theta|.
    CHECK(q_d_edge(50.0, kPi - theta, kDisk200) == doctest::Approx(qe));
    CHECK(q_d_edge(50.0, kPi + theta, kDisk200) == doctest::Approx(qe));
  }
  CHECK(argmax_edge == 31);  // grid point nearest pi/2 from below; symmetric peak
  CHECK((argmax_edge == 31 || argmax_edge == 32));
  CHECK((argmax_vertex == 31 || argmax_vertex == 32));
}

}  // TEST_SUITE
