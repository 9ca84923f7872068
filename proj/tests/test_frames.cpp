#include <cmath>
#include <limits>

#include "doctest.h"
#include "windward/detail/random.hpp"
#include "windward/frames.hpp"

using namespace windward;

TEST_CASE("wind_magnitude basics") {
  CHECK(wind_magnitude(3.0, 4.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(wind_magnitude(0.0, 0.0) == 0.0);
  CHECK(wind_magnitude(1.0, 1.0) ==
        doctest::Approx(1.4142135623730951).epsilon(1e-12));
  CHECK_THROWS_AS(wind_magnitude(std::nan(""), 1.0), InvalidInputError);
  CHECK_THROWS_AS(
      wind_magnitude(1.0, std::numeric_limits<double>::infinity()),
      InvalidInputError);
}

TEST_CASE("body to true rotation") {
  SUBCASE("identity at yaw 0") {
    const TrueWind w = to_true_north_east(WindSample{0, 3.0, 2.0},
                                          normalize_angle(0.0));
    CHECK(w.north_r == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w.east_r == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("quarter turn") {
    // v=2 along the nose, u=3 to the right, nose pointing east: the nose
    // component becomes east, the right-hand component points south.
    const TrueWind w = to_true_north_east(WindSample{0, 3.0, 2.0},
                                          normalize_angle(90.0));
    CHECK(w.north_r == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(w.east_r == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("magnitude preserved and rotation invertible") {
    windward::detail::Rng rng(20240817u);
    for (int i = 0; i < 2000; ++i) {
      WindSample in;
      in.u = windward::detail::uniform(rng, -40.0, 40.0);
      in.v = windward::detail::uniform(rng, -40.0, 40.0);
      const Angle yaw =
          normalize_angle(windward::detail::uniform(rng, -720.0, 720.0));
      const TrueWind w = to_true_north_east(in, yaw);
      CHECK(std::abs(wind_magnitude(w.east_r, w.north_r) -
                     wind_magnitude(in.u, in.v)) < 1e-9);
      const WindSample back = to_body_frame(w, yaw);
      CHECK(std::abs(back.u - in.u) < 1e-9);
      CHECK(std::abs(back.v - in.v) < 1e-9);
    }
  }
}

TEST_CASE("angle normalization") {
  CHECK(normalize_angle(180.0).degrees() == -180.0);
  CHECK(normalize_angle(-540.0).degrees() == -180.0);
  CHECK(normalize_angle(45.0).degrees() == 45.0);
  CHECK(normalize_angle(-180.0).degrees() == -180.0);
  CHECK(normalize_angle(360.0).degrees() == 0.0);
  CHECK_THROWS_AS(normalize_angle(std::nan("")), InvalidInputError);

  SUBCASE("idempotent and 360-periodic") {
    windward::detail::Rng rng(7u);
    for (int i = 0; i < 1000; ++i) {
      const double deg = windward::detail::uniform(rng, -2000.0, 2000.0);
      const double once = normalize_angle(deg).degrees();
      CHECK(normalize_angle(once).degrees() == once);
      CHECK(once >= -180.0);
      CHECK(once < 180.0);
      const double shifted = normalize_angle(deg + 3 * 360.0).degrees();
      CHECK(std::abs(shifted - once) < 1e-9);
    }
  }
}

TEST_CASE("speed units") {
  CHECK(Speed::mph(1.0).as_ms() == 0.44704);
  CHECK(Speed::ms(0.44704).as_mph() == doctest::Approx(1.0).epsilon(1e-12));
  // 2.2369 mph is the usual textbook approximation of 1 m/s, not exact.
  CHECK(Speed::mph(2.2369).as_ms() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(Speed::mph(2.2369).as_ms() != 1.0);

  SUBCASE("round trip within 1e-12 relative") {
    windward::detail::Rng rng(99u);
    for (int i = 0; i < 1000; ++i) {
      const double mph = windward::detail::uniform(rng, -60.0, 60.0);
      const double back = Speed::ms(Speed::mph(mph).as_ms()).as_mph();
      CHECK(std::abs(back - mph) <= 1e-12 * std::max(1.0, std::abs(mph)));
    }
  }
}
