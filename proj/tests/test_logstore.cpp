#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "windward/detail/random.hpp"
#include "windward/logstore.hpp"

using namespace windward;

namespace {

FlightRecord random_record(std::uint64_t seed, std::size_t n) {
  windward::detail::Rng rng(seed);
  FlightRecord r;
  r.meta.flight_id = "flight-" + std::to_string(seed);
  r.meta.takeoff_label = "pad A";
  r.meta.sample_dt = 0.2;
  r.meta.created_at = "2024-06-01T10:00:00Z";
  for (std::size_t i = 0; i < n; ++i) {
    TelemetrySample s;
    s.t = static_cast<double>(i) * r.meta.sample_dt;
    s.x_speed_ms = windward::detail::uniform(rng, -15.0, 15.0);
    s.y_speed_ms = windward::detail::uniform(rng, -15.0, 15.0);
    s.height_m = windward::detail::uniform(rng, 0.0, 80.0);
    s.yaw = normalize_angle(windward::detail::uniform(rng, -180.0, 180.0));
    r.telemetry.push_back(s);
    WindSample w;
    w.t = s.t;
    w.u = windward::detail::uniform(rng, -20.0, 20.0);
    w.v = windward::detail::uniform(rng, -20.0, 20.0);
    r.wind.push_back(w);
  }
  return r;
}

}  // namespace

TEST_CASE("flight CSV parsing") {
  SUBCASE("mph converts to m/s") {
    std::istringstream in(
        "time_s,xSpeed_mph,ySpeed_mph,height_m,yaw_deg\n0.0,2.2369,0,10,0\n");
    const auto samples = parse_flight_csv(in);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].x_speed_ms == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(samples[0].y_speed_ms == 0.0);
    CHECK(samples[0].height_m == 10.0);
  }
  SUBCASE("columns match by name, any order, extras ignored") {
    std::istringstream in(
        "yaw_deg,height_m,battery,ySpeed_mph,xSpeed_mph,time_s\n"
        "270,12,97,0,1,0.4\n");
    const auto samples = parse_flight_csv(in);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].yaw.degrees() == -90.0);
    CHECK(samples[0].t == 0.4);
    CHECK(samples[0].x_speed_ms == doctest::Approx(0.44704).epsilon(1e-12));
  }
  SUBCASE("header only is empty input") {
    std::istringstream in("time_s,xSpeed_mph,ySpeed_mph,height_m,yaw_deg\n");
    CHECK_THROWS_AS(parse_flight_csv(in), EmptyInputError);
  }
  SUBCASE("empty file is empty input") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_flight_csv(in), EmptyInputError);
  }
  SUBCASE("missing column is a schema error naming it") {
    std::istringstream in("time_s,xSpeed_mph,height_m,yaw_deg\n0,1,2,3\n");
    try {
      parse_flight_csv(in);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("ySpeed_mph") != std::string::npos);
    }
  }
  SUBCASE("bad cell reports its line number") {
    std::istringstream in(
        "time_s,xSpeed_mph,ySpeed_mph,height_m,yaw_deg\n"
        "0,1,0,10,0\n0.2,oops,0,10,0\n");
    try {
      parse_flight_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("negative time rejected") {
    std::istringstream in(
        "time_s,xSpeed_mph,ySpeed_mph,height_m,yaw_deg\n-1,1,0,10,0\n");
    CHECK_THROWS_AS(parse_flight_csv(in), ParseError);
  }
}

TEST_CASE("anemometer CSV parsing") {
  SUBCASE("direct mapping") {
    std::istringstream in("time_s,u_ms,v_ms\n0.0,3,4\n");
    const auto samples = parse_anemometer_csv(in);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].u == 3.0);
    CHECK(samples[0].v == 4.0);
  }
  SUBCASE("cardinality preserved") {
    std::ostringstream text;
    text << "time_s,u_ms,v_ms\n";
    for (int i = 0; i < 100; ++i) text << 0.1 * i << ",1,2\n";
    std::istringstream in(text.str());
    CHECK(parse_anemometer_csv(in).size() == 100);
  }
  SUBCASE("non-numeric component reports its line") {
    std::istringstream in("time_s,u_ms,v_ms\n0,x,4\n");
    try {
      parse_anemometer_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("sanity bound enforced") {
    std::istringstream in("time_s,u_ms,v_ms\n0,80,0\n");
    CHECK_THROWS_AS(parse_anemometer_csv(in), ParseError);
    std::istringstream relaxed("time_s,u_ms,v_ms\n0,80,0\n");
    CHECK(parse_anemometer_csv(relaxed, 100.0).size() == 1);
  }
}

TEST_CASE("alignment") {
  SUBCASE("identical grids zip 1:1") {
    std::vector<TelemetrySample> tel;
    std::vector<WindSample> wind;
    for (int i = 0; i < 5; ++i) {
      TelemetrySample s;
      s.t = 0.2 * i;
      s.x_speed_ms = i;
      tel.push_back(s);
      wind.push_back(WindSample{0.2 * i, 1.0 * i, 0.0});
    }
    const FlightRecord r = align(tel, wind, 0.2);
    REQUIRE(r.size() == 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(r.telemetry[i].x_speed_ms == i);
      CHECK(r.wind[i].u == i);
      CHECK(r.telemetry[i].t == doctest::Approx(0.2 * i).epsilon(1e-12));
    }
  }
  SUBCASE("10 Hz wind against 5 Hz telemetry keeps every other wind row") {
    std::vector<TelemetrySample> tel;
    std::vector<WindSample> wind;
    for (int i = 0; i < 5; ++i) {
      TelemetrySample s;
      s.t = 0.2 * i;
      tel.push_back(s);
    }
    for (int i = 0; i < 10; ++i) {
      wind.push_back(WindSample{0.1 * i, 1.0 * i, 0.0});
    }
    const FlightRecord r = align(tel, wind, 0.2);
    REQUIRE(r.size() == 5);
    const double expected_u[] = {0.0, 2.0, 4.0, 6.0, 8.0};
    for (int i = 0; i < 5; ++i) CHECK(r.wind[i].u == expected_u[i]);
  }
  SUBCASE("offset series are rebased to t = 0") {
    std::vector<TelemetrySample> tel;
    std::vector<WindSample> wind;
    for (int i = 0; i < 10; ++i) {
      TelemetrySample s;
      s.t = 1.0 + 0.2 * i;
      tel.push_back(s);
      wind.push_back(WindSample{1.0 + 0.2 * i, 0.0, 0.0});
    }
    const FlightRecord r = align(tel, wind, 0.2);
    CHECK(r.telemetry.front().t == 0.0);
    CHECK(r.size() == 10);
  }
  SUBCASE("disjoint ranges cannot align") {
    std::vector<TelemetrySample> tel(3);
    tel[0].t = 0.0;
    tel[1].t = 0.2;
    tel[2].t = 0.4;
    std::vector<WindSample> wind = {WindSample{9.0, 0, 0},
                                    WindSample{9.2, 0, 0}};
    CHECK_THROWS_AS(align(tel, wind, 0.2), AlignmentError);
  }
  SUBCASE("coverage gap is an error, not a silent skip") {
    std::vector<TelemetrySample> tel;
    for (double t : {0.0, 0.2, 0.4, 3.0, 3.2}) {
      TelemetrySample s;
      s.t = t;
      tel.push_back(s);
    }
    std::vector<WindSample> wind;
    for (int i = 0; i <= 16; ++i) wind.push_back(WindSample{0.2 * i, 0, 0});
    CHECK_THROWS_AS(align(tel, wind, 0.2), AlignmentError);
  }
  SUBCASE("empty input rejected") {
    std::vector<TelemetrySample> tel(1);
    CHECK_THROWS_AS(align(tel, {}, 0.2), EmptyInputError);
  }
}

TEST_CASE("record persistence") {
  SUBCASE("round trip is exact and re-serialization byte-identical") {
    const FlightRecord r = random_record(42u, 50);
    std::ostringstream first;
    save_record(r, first);
    std::istringstream in(first.str());
    const FlightRecord back = load_record(in);
    REQUIRE(back.size() == r.size());
    CHECK(back.meta.flight_id == r.meta.flight_id);
    CHECK(back.meta.takeoff_label == r.meta.takeoff_label);
    CHECK(back.meta.sample_dt == r.meta.sample_dt);
    CHECK(back.meta.created_at == r.meta.created_at);
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(back.telemetry[i].x_speed_ms == r.telemetry[i].x_speed_ms);
      CHECK(back.telemetry[i].y_speed_ms == r.telemetry[i].y_speed_ms);
      CHECK(back.telemetry[i].height_m == r.telemetry[i].height_m);
      CHECK(back.telemetry[i].yaw.degrees() == r.telemetry[i].yaw.degrees());
      CHECK(back.wind[i].u == r.wind[i].u);
      CHECK(back.wind[i].v == r.wind[i].v);
    }
    std::ostringstream second;
    save_record(back, second);
    CHECK(first.str() == second.str());
  }
  SUBCASE("truncated file fails the checksum") {
    const FlightRecord r = random_record(7u, 20);
    std::ostringstream out;
    save_record(r, out);
    std::string text = out.str();
    // Drop one data line but keep the trailer.
    const std::size_t crc_pos = text.rfind("# crc32=");
    const std::size_t cut = text.rfind('\n', crc_pos - 2);
    text = text.substr(0, cut + 1) + text.substr(crc_pos);
    std::istringstream in(text);
    CHECK_THROWS_AS(load_record(in), FormatError);
  }
  SUBCASE("flipped byte fails the checksum") {
    const FlightRecord r = random_record(8u, 20);
    std::ostringstream out;
    save_record(r, out);
    std::string text = out.str();
    const std::size_t pos = text.find("0.2");
    REQUIRE(pos != std::string::npos);
    text[pos] = '9';
    std::istringstream in(text);
    CHECK_THROWS_AS(load_record(in), FormatError);
  }
  SUBCASE("wrong version rejected") {
    std::istringstream in("# windward-record v9\n# crc32=00000000\n");
    CHECK_THROWS_AS(load_record(in), FormatError);
  }
  SUBCASE("empty record cannot be saved") {
    FlightRecord r;
    std::ostringstream out;
    CHECK_THROWS_AS(save_record(r, out), InvalidInputError);
  }
  SUBCASE("randomized round trips") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const FlightRecord r = random_record(seed, 5 + seed % 40);
      std::ostringstream out;
      save_record(r, out);
      std::istringstream in(out.str());
      const FlightRecord back = load_record(in);
      std::ostringstream again;
      save_record(back, again);
      CHECK(out.str() == again.str());
    }
  }
}
