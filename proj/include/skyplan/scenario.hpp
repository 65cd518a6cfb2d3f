#pragma once

// Problem instances: parsing, validation, serialization and the internal
// nondimensionalized form used by the optimizer.

#include "skyplan/types.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skyplan {

struct GroundStation {
  int id = 1;
  Vec2 position = Vec2::Zero();
  double reference_snr_db = 80.0;

  /// Linear reference SNR h = P β₀ / σ².
  double reference_snr() const { return db_to_linear(reference_snr_db); }
};

struct VehicleParams {
  double c1 = 0.002;
  double c2 = 80.0;
  double gravity = 10.0;
  double altitude = 50.0;
  double v_max = 15.0;
  double a_max = 5.0;
  Vec2 v0 = Vec2(2.0, 2.0);
};

struct Timing {
  double total_time = 50.0;
  double slot = 5.0;
  int n_slots = 10;
};

struct Scenario {
  std::vector<GroundStation> stations;
  VehicleParams vehicle;
  Timing timing;
  Vec2 q_start = Vec2::Zero();
  Vec2 q_final = Vec2::Zero();
  double gamma_min = 2.0;
  double penalty_lambda = 1e5;
  double length_scale = 100.0;

  int station_count() const { return static_cast<int>(stations.size()); }
};

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScenarioValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Station geometry and linear reference SNRs in a consistent length unit.
struct RadioLayout {
  std::vector<Vec2> positions;
  std::vector<double> snr;
  double altitude = 0.0;

  int size() const { return static_cast<int>(positions.size()); }
};

/// Coefficients of the slack-form propulsion power
/// c1 (‖v‖² + ε²)^{3/2} + (c2/θ)(1 + ‖a‖²/g).
struct PowerCoefficients {
  double c1 = 0.002;
  double c2 = 80.0;
  double gravity = 10.0;
  double speed_smoothing = 1e-6;
};

inline constexpr double kDefaultSpeedSmoothing = 1e-6;  // m/s

/// Scenario with every length divided by `length_scale`. Reference SNRs are
/// divided by length_scale² so that SINR values are unchanged; the power
/// coefficients absorb the unit change so power stays in watts.
struct ScaledScenario {
  RadioLayout radio;
  std::vector<int> station_ids;
  std::vector<double> station_snr_db;
  PowerCoefficients power;
  double v_max = 0.0;
  double a_max = 0.0;
  Vec2 v0 = Vec2::Zero();
  Vec2 q_start = Vec2::Zero();
  Vec2 q_final = Vec2::Zero();
  double total_time = 0.0;
  double slot = 0.0;
  int n_slots = 0;
  double gamma_min = 0.0;
  double penalty_lambda = 0.0;
  double length_scale = 1.0;

  int station_count() const { return radio.size(); }
};

inline int slot_count(double total_time, double slot) {
  const double ratio = total_time / slot;
  // Guard against T/T_c landing a hair above an integer.
  return static_cast<int>(std::ceil(ratio - 1e-9 * ratio));
}

inline RadioLayout radio_layout(const Scenario& s) {
  RadioLayout r;
  r.altitude = s.vehicle.altitude;
  for (const auto& st : s.stations) {
    r.positions.push_back(st.position);
    r.snr.push_back(st.reference_snr());
  }
  return r;
}

namespace detail {

inline void fail_validation(const std::string& msg) { throw ScenarioValidationError(msg); }

inline void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) fail_validation(std::string(name) + " must be finite");
}

inline void require_positive(double value, const char* name) {
  require_finite(value, name);
  if (!(value > 0.0)) fail_validation(std::string(name) + " must be positive");
}

}  // namespace detail

/// Checks every Scenario invariant and recomputes the slot count. Throws
/// ScenarioValidationError naming the first violated invariant.
inline void validate(Scenario& s) {
  using detail::fail_validation;
  using detail::require_finite;
  using detail::require_positive;

  if (s.stations.empty()) fail_validation("stations must contain at least one ground station");
  const int J = s.station_count();
  std::set<int> ids;
  for (const auto& st : s.stations) {
    if (st.id < 1 || st.id > J) fail_validation("station id must lie in 1..J");
    if (!ids.insert(st.id).second) fail_validation("station ids must be unique");
    require_finite(st.position.x(), "station x_m");
    require_finite(st.position.y(), "station y_m");
    require_finite(st.reference_snr_db, "ref_snr_db");
  }
  std::sort(s.stations.begin(), s.stations.end(),
            [](const GroundStation& a, const GroundStation& b) { return a.id < b.id; });
  for (int i = 0; i < J; ++i)
    for (int k = i + 1; k < J; ++k)
      if (s.stations[i].position == s.stations[k].position)
        fail_validation("station positions must be pairwise distinct");

  const auto& v = s.vehicle;
  require_positive(v.c1, "c1");
  require_positive(v.c2, "c2");
  require_positive(v.gravity, "g");
  require_positive(v.altitude, "altitude_m");
  require_positive(v.v_max, "v_max");
  require_positive(v.a_max, "a_max");
  require_finite(v.v0.x(), "v0");
  require_finite(v.v0.y(), "v0");
  if (v.v0.norm() > v.v_max) fail_validation("initial speed |v0| must not exceed v_max");

  require_positive(s.timing.slot, "slot_T_c");
  require_positive(s.timing.total_time, "total_time_T");
  if (s.timing.slot > s.timing.total_time) fail_validation("slot_T_c must not exceed total_time_T");
  s.timing.n_slots = slot_count(s.timing.total_time, s.timing.slot);

  for (double c : {s.q_start.x(), s.q_start.y(), s.q_final.x(), s.q_final.y()})
    require_finite(c, "endpoint coordinate");
  require_finite(s.gamma_min, "gamma_min");
  if (s.gamma_min < 0.0) fail_validation("gamma_min must be non-negative");
  require_positive(s.penalty_lambda, "lambda");
  require_positive(s.length_scale, "length_scale_m");
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw ScenarioParseError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ScenarioParseError("unknown key '" + item.key() + "' in " + where);
  }
}

inline const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioParseError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

inline double number(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_number()) throw ScenarioParseError("'" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

inline Vec2 pair(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ScenarioParseError("'" + std::string(key) + "' in " + where + " must be a [x, y] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace detail

/// Builds a validated Scenario from its JSON document.
inline Scenario scenario_from_json(const nlohmann::json& doc) {
  using namespace detail;
  reject_unknown_keys(doc, {"stations", "vehicle", "timing", "endpoints", "gamma_min", "lambda", "length_scale_m"},
                      "scenario");
  Scenario s;

  const json& stations = member(doc, "stations", "scenario");
  if (!stations.is_array()) throw ScenarioParseError("'stations' must be an array");
  for (const auto& st : stations) {
    reject_unknown_keys(st, {"id", "x_m", "y_m", "ref_snr_db"}, "station");
    const json& id = member(st, "id", "station");
    if (!id.is_number_integer()) throw ScenarioParseError("station 'id' must be an integer");
    GroundStation g;
    g.id = id.get<int>();
    g.position = {number(st, "x_m", "station"), number(st, "y_m", "station")};
    g.reference_snr_db = number(st, "ref_snr_db", "station");
    s.stations.push_back(g);
  }

  const json& veh = member(doc, "vehicle", "scenario");
  reject_unknown_keys(veh, {"c1", "c2", "g", "altitude_m", "v_max", "a_max", "v0"}, "vehicle");
  s.vehicle.c1 = number(veh, "c1", "vehicle");
  s.vehicle.c2 = number(veh, "c2", "vehicle");
  s.vehicle.gravity = number(veh, "g", "vehicle");
  s.vehicle.altitude = number(veh, "altitude_m", "vehicle");
  s.vehicle.v_max = number(veh, "v_max", "vehicle");
  s.vehicle.a_max = number(veh, "a_max", "vehicle");
  s.vehicle.v0 = pair(veh, "v0", "vehicle");

  const json& tim = member(doc, "timing", "scenario");
  reject_unknown_keys(tim, {"T_s", "Tc_s"}, "timing");
  s.timing.total_time = number(tim, "T_s", "timing");
  s.timing.slot = number(tim, "Tc_s", "timing");

  const json& ends = member(doc, "endpoints", "scenario");
  reject_unknown_keys(ends, {"start", "final"}, "endpoints");
  s.q_start = pair(ends, "start", "endpoints");
  s.q_final = pair(ends, "final", "endpoints");

  s.gamma_min = number(doc, "gamma_min", "scenario");
  s.penalty_lambda = number(doc, "lambda", "scenario");
  if (doc.contains("length_scale_m")) s.length_scale = number(doc, "length_scale_m", "scenario");

  validate(s);
  return s;
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json doc;
  auto stations = nlohmann::ordered_json::array();
  for (const auto& st : s.stations) {
    nlohmann::ordered_json j;
    j["id"] = st.id;
    j["x_m"] = st.position.x();
    j["y_m"] = st.position.y();
    j["ref_snr_db"] = st.reference_snr_db;
    stations.push_back(j);
  }
  doc["stations"] = stations;
  const auto& v = s.vehicle;
  doc["vehicle"] = {{"c1", v.c1},         {"c2", v.c2},       {"g", v.gravity},
                    {"altitude_m", v.altitude}, {"v_max", v.v_max}, {"a_max", v.a_max},
                    {"v0", {v.v0.x(), v.v0.y()}}};
  doc["timing"] = {{"T_s", s.timing.total_time}, {"Tc_s", s.timing.slot}};
  doc["endpoints"] = {{"start", {s.q_start.x(), s.q_start.y()}}, {"final", {s.q_final.x(), s.q_final.y()}}};
  doc["gamma_min"] = s.gamma_min;
  doc["lambda"] = s.penalty_lambda;
  doc["length_scale_m"] = s.length_scale;
  return doc;
}

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioParseError(std::string("malformed scenario JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Scaling

inline ScaledScenario nondimensionalize(const Scenario& s, double speed_smoothing = kDefaultSpeedSmoothing) {
  const double L = s.length_scale;
  ScaledScenario out;
  out.length_scale = L;
  out.radio.altitude = s.vehicle.altitude / L;
  for (const auto& st : s.stations) {
    out.radio.positions.push_back(st.position / L);
    out.radio.snr.push_back(st.reference_snr() / (L * L));
    out.station_ids.push_back(st.id);
    out.station_snr_db.push_back(st.reference_snr_db);
  }
  // c1‖v‖³ with v = L ṽ gives c1 L³ ‖ṽ‖³; c2/θ with θ = L θ̃ gives (c2/L)/θ̃;
  // ‖a‖²/g with a = L ã gives ‖ã‖²/(g/L²).
  out.power.c1 = s.vehicle.c1 * L * L * L;
  out.power.c2 = s.vehicle.c2 / L;
  out.power.gravity = s.vehicle.gravity / (L * L);
  out.power.speed_smoothing = speed_smoothing / L;
  out.v_max = s.vehicle.v_max / L;
  out.a_max = s.vehicle.a_max / L;
  out.v0 = s.vehicle.v0 / L;
  out.q_start = s.q_start / L;
  out.q_final = s.q_final / L;
  out.total_time = s.timing.total_time;
  out.slot = s.timing.slot;
  out.n_slots = s.timing.n_slots;
  out.gamma_min = s.gamma_min;
  out.penalty_lambda = s.penalty_lambda;
  return out;
}

/// Inverse of nondimensionalize.
inline Scenario restore_units(const ScaledScenario& z) {
  const double L = z.length_scale;
  Scenario s;
  for (int j = 0; j < z.station_count(); ++j) {
    GroundStation g;
    g.id = z.station_ids[j];
    g.position = z.radio.positions[j] * L;
    g.reference_snr_db = linear_to_db(z.radio.snr[j] * L * L);
    s.stations.push_back(g);
  }
  s.vehicle.c1 = z.power.c1 / (L * L * L);
  s.vehicle.c2 = z.power.c2 * L;
  s.vehicle.gravity = z.power.gravity * L * L;
  s.vehicle.altitude = z.radio.altitude * L;
  s.vehicle.v_max = z.v_max * L;
  s.vehicle.a_max = z.a_max * L;
  s.vehicle.v0 = z.v0 * L;
  s.timing = {z.total_time, z.slot, z.n_slots};
  s.q_start = z.q_start * L;
  s.q_final = z.q_final * L;
  s.gamma_min = z.gamma_min;
  s.penalty_lambda = z.penalty_lambda;
  s.length_scale = L;
  return s;
}

// ---------------------------------------------------------------------------
// Bundled instances

/// Published vehicle, timing and penalty constants; the station layout is a
/// stand-in since the original map coordinates are unavailable.
inline Scenario published_constants() {
  Scenario s;
  s.vehicle = VehicleParams{};
  s.timing = Timing{50.0, 5.0, 10};
  s.gamma_min = 2.0;
  s.penalty_lambda = 1e5;
  s.length_scale = 100.0;
  return s;
}

inline std::vector<GroundStation> make_stations(std::initializer_list<std::pair<double, double>> xy,
                                                double snr_db = 80.0) {
  std::vector<GroundStation> out;
  int id = 1;
  for (const auto& [x, y] : xy) out.push_back({id++, Vec2(x, y), snr_db});
  return out;
}

/// Five stations, v_max = 15 m/s, flight (0,0) -> (100,400).
inline Scenario map1_scenario() {
  Scenario s = published_constants();
  s.vehicle.v_max = 15.0;
  s.q_start = Vec2(0.0, 0.0);
  s.q_final = Vec2(100.0, 400.0);
  s.stations = make_stations({{-74.0, 33.0}, {151.0, 95.0}, {-80.0, 173.0}, {-16.0, 290.0}, {97.0, 371.0}});
  validate(s);
  return s;
}

/// Eight stations, v_max = 12 m/s, flight (0,0) -> (400,0). Three relays sit
/// on the corridor; the other five are distant and only add interference.
inline Scenario map2_scenario() {
  Scenario s = published_constants();
  s.vehicle.v_max = 12.0;
  s.q_start = Vec2(0.0, 0.0);
  s.q_final = Vec2(400.0, 0.0);
  s.stations = make_stations({{120.0, 0.0},
                              {260.0, 0.0},
                              {400.0, 0.0},
                              {-300.0, 800.0},
                              {200.0, 960.0},
                              {700.0, 640.0},
                              {-300.0, -800.0},
                              {400.0, -960.0}});
  validate(s);
  return s;
}

inline std::vector<Scenario> default_scenarios() { return {map1_scenario(), map2_scenario()}; }

}  // namespace skyplan
