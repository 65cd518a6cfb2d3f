#include "skyplan/model.hpp"
#include "skyplan/scenario.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace skyplan;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

std::string map1_text() { return serialize_scenario(map1_scenario()); }

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("bundled map 1 parses into ten slots") {
  const Scenario s = parse_scenario(map1_text());
  CHECK(s.station_count() == 5);
  CHECK(s.vehicle.v_max == 15.0);
  CHECK(s.timing.total_time == 50.0);
  CHECK(s.timing.slot == 5.0);
  CHECK(s.gamma_min == 2.0);
  CHECK(s.timing.n_slots == 10);
}

TEST_CASE("published constants on both bundled maps") {
  for (const Scenario& s : default_scenarios()) {
    CHECK(s.vehicle.c1 == 0.002);
    CHECK(s.vehicle.c2 == 80.0);
    CHECK(s.vehicle.altitude == 50.0);
    CHECK(s.vehicle.gravity == 10.0);
    CHECK(s.penalty_lambda == 1e5);
    CHECK(s.vehicle.v0 == Vec2(2.0, 2.0));
    CHECK(s.vehicle.a_max == 5.0);
    CHECK(s.timing.n_slots == 10);
    CHECK(s.q_start == Vec2(0.0, 0.0));
  }
  const Scenario m1 = map1_scenario(), m2 = map2_scenario();
  CHECK(m1.q_final == Vec2(100.0, 400.0));
  CHECK(m2.q_final == Vec2(400.0, 0.0));
  CHECK(m2.station_count() == 8);
  CHECK(m2.vehicle.v_max == 12.0);
}

TEST_CASE("80 dB reference SNR is 1e8 linear") {
  const Scenario s = parse_scenario(map1_text());
  CHECK_THAT(s.stations[0].reference_snr(), WithinRel(1e8, 1e-12));
  CHECK_THAT(linear_to_db(db_to_linear(37.5)), WithinRel(37.5, 1e-12));
}

TEST_CASE("zero slot length is rejected by name") {
  const std::string bad = replace_once(map1_text(), "\"Tc_s\": 5.0", "\"Tc_s\": 0.0");
  CHECK_THROWS_WITH(parse_scenario(bad), ContainsSubstring("slot_T_c must be positive"));
}

TEST_CASE("validation errors name the invariant") {
  SECTION("slot longer than horizon") {
    Scenario s = map1_scenario();
    s.timing.slot = 60.0;
    CHECK_THROWS_WITH(validate(s), ContainsSubstring("slot_T_c must not exceed"));
  }
  SECTION("initial speed above cap") {
    Scenario s = map1_scenario();
    s.vehicle.v0 = Vec2(20.0, 0.0);
    CHECK_THROWS_WITH(validate(s), ContainsSubstring("v0"));
  }
  SECTION("duplicate positions") {
    Scenario s = map1_scenario();
    s.stations[1].position = s.stations[0].position;
    CHECK_THROWS_WITH(validate(s), ContainsSubstring("pairwise distinct"));
  }
  SECTION("negative threshold") {
    Scenario s = map1_scenario();
    s.gamma_min = -1.0;
    CHECK_THROWS_AS(validate(s), ScenarioValidationError);
  }
  SECTION("no stations") {
    Scenario s = map1_scenario();
    s.stations.clear();
    CHECK_THROWS_AS(validate(s), ScenarioValidationError);
  }
}

TEST_CASE("parser rejects unknown and malformed input") {
  CHECK_THROWS_AS(parse_scenario("{not json"), ScenarioParseError);
  CHECK_THROWS_WITH(parse_scenario(replace_once(map1_text(), "\"gamma_min\"", "\"extra\": 1, \"gamma_min\"")),
                    ContainsSubstring("unknown key 'extra'"));
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ScenarioParseError);
}

TEST_CASE("slot count rounds up") {
  CHECK(slot_count(50.0, 5.0) == 10);
  CHECK(slot_count(51.0, 5.0) == 11);
  CHECK(slot_count(5.0, 5.0) == 1);
  CHECK(slot_count(0.3, 0.1) == 3);
}

TEST_CASE("load, serialize, load is the identity") {
  for (const Scenario& s : default_scenarios()) {
    const std::string once = serialize_scenario(s);
    const Scenario back = parse_scenario(once);
    CHECK(serialize_scenario(back) == once);
    REQUIRE(back.station_count() == s.station_count());
    for (int j = 0; j < s.station_count(); ++j) {
      CHECK(back.stations[j].position == s.stations[j].position);
      CHECK(back.stations[j].reference_snr_db == s.stations[j].reference_snr_db);
    }
    CHECK(back.q_final == s.q_final);
    CHECK(back.vehicle.v0 == s.vehicle.v0);
  }
}

TEST_CASE("degenerate loiter scenario validates") {
  Scenario s = map1_scenario();
  s.q_final = s.q_start;
  CHECK_NOTHROW(validate(s));
}

TEST_CASE("scaling examples") {
  Scenario s = map2_scenario();
  const ScaledScenario z = nondimensionalize(s);
  CHECK(z.q_final == Vec2(4.0, 0.0));
  CHECK_THAT(z.radio.altitude * z.radio.altitude, WithinRel(0.25, 1e-12));
}

TEST_CASE("scale round trip is the identity") {
  for (const Scenario& s : default_scenarios()) {
    const Scenario back = restore_units(nondimensionalize(s));
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    CHECK(rel(back.vehicle.c1, s.vehicle.c1) < 1e-12);
    CHECK(rel(back.vehicle.c2, s.vehicle.c2) < 1e-12);
    CHECK(rel(back.vehicle.gravity, s.vehicle.gravity) < 1e-12);
    CHECK(rel(back.vehicle.altitude, s.vehicle.altitude) < 1e-12);
    CHECK(rel(back.vehicle.v_max, s.vehicle.v_max) < 1e-12);
    CHECK(rel(back.vehicle.a_max, s.vehicle.a_max) < 1e-12);
    CHECK((back.vehicle.v0 - s.vehicle.v0).norm() <= 1e-12 * s.vehicle.v0.norm());
    CHECK((back.q_final - s.q_final).norm() <= 1e-12 * s.q_final.norm());
    CHECK(rel(back.timing.slot, s.timing.slot) < 1e-12);
    for (int j = 0; j < s.station_count(); ++j) {
      CHECK((back.stations[j].position - s.stations[j].position).norm() <= 1e-12 * s.stations[j].position.norm());
      CHECK(rel(back.stations[j].reference_snr_db, s.stations[j].reference_snr_db) < 1e-12);
    }
  }
}

TEST_CASE("SINR is invariant under scaling") {
  const Scenario s = map2_scenario();
  const ScaledScenario z = nondimensionalize(s);
  const RadioLayout raw = radio_layout(s);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-300.0, 700.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 q(U(rng), U(rng));
    for (int j = 0; j < s.station_count(); ++j) {
      const double a = model::sinr(q, j, raw).sinr;
      const double b = model::sinr(q / s.length_scale, j, z.radio).sinr;
      CHECK(std::abs(a - b) <= 1e-12 * a);
    }
  }
}

TEST_CASE("scaled power matches physical power") {
  const Scenario s = map1_scenario();
  const ScaledScenario z = nondimensionalize(s, 0.0);
  const PowerCoefficients phys{s.vehicle.c1, s.vehicle.c2, s.vehicle.gravity, 0.0};
  const Vec2 v(7.0, -3.0), a(1.5, 2.0);
  const double L = s.length_scale;
  const double p_phys = model::propulsion_power(v, a, phys);
  const double p_scaled = model::propulsion_power(v / L, a / L, z.power);
  CHECK_THAT(p_scaled, WithinRel(p_phys, 1e-12));
}
