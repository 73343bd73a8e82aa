#include <doctest.h>

#include "traceshape/angles.hpp"

using namespace traceshape;

TEST_SUITE("angles") {

TEST_CASE("modone wraps into [0, 2pi)") {
  CHECK(modone(0.0) == 0.0);
  CHECK(modone(-kPi / 2.0) == doctest::Approx(3.0 * kPi / 2.0));
  CHECK(modone(4.5 * kPi) == doctest::Approx(0.5 * kPi));
  CHECK(modone(kTwoPi) == doctest::Approx(0.0));
  CHECK(modone(-1e-9) < kTwoPi);
}

TEST_CASE("mod_interval_contains handles wrapping and half-open bounds") {
  CHECK(mod_interval_contains(0.1, 0.0, kPi));
  CHECK(mod_interval_contains(0.1, 3.0 * kPi / 2.0, 5.0 * kPi / 2.0));
  CHECK_FALSE(mod_interval_contains(kPi, 0.0, kPi));
}

TEST_CASE("inner_angle of simple corners") {
  CHECK(inner_angle(0.0, kPi / 2.0) == doctest::Approx(kPi / 2.0));
  CHECK(inner_angle(0.0, kPi / 4.0) == doctest::Approx(3.0 * kPi / 4.0));
  CHECK(inner_angle(0.0, 3.0 * kPi / 2.0) == doctest::Approx(3.0 * kPi / 2.0));
}

TEST_CASE("inner_angle rejects straight and folded vertices") {
  CHECK_THROWS_AS(inner_angle(0.3, 0.3), std::invalid_argument);        // gamma = pi
  CHECK_THROWS_AS(inner_angle(0.0, kPi), std::invalid_argument);        // gamma = 0 or 2pi
  CHECK_THROWS_AS(inner_angle(0.1, 0.1 + 1e-13), std::invalid_argument);
}

}  // TEST_SUITE
