#include "skyplan/feasibility.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace skyplan;
using namespace skyplan::feasibility;

namespace {

// 400 m eastward flight, d0 = v_max·T_c = 75 m, ten slots.
Scenario corridor(std::vector<GroundStation> stations) {
  Scenario s = published_constants();
  s.q_start = Vec2(0.0, 0.0);
  s.q_final = Vec2(400.0, 0.0);
  s.stations = std::move(stations);
  return s;
}

// Reference SNR giving a coverage radius r at zero interference.
double snr_db_for_radius(double r, double gamma, double H) { return linear_to_db(gamma * (r * r + H * H)); }

// The three chain inequalities, checked directly from the certificate.
bool chain_holds(const Scenario& s, const FeasibilityCertificate& c, double interference) {
  const auto& k = c.association->serving;
  const double d0 = s.vehicle.v_max * s.timing.slot;
  auto r = [&](int j) {
    const double rad = s.stations[j].reference_snr() / (s.gamma_min * (interference + 1.0)) -
                       s.vehicle.altitude * s.vehicle.altitude;
    return rad > 0.0 ? std::sqrt(rad) : -1.0;
  };
  auto Q = [&](int j) { return s.stations[j].position; };
  const double tol = 1e-9;
  if ((Q(k[0]) - s.q_start).norm() > r(k[0]) + d0 + tol) return false;
  for (std::size_t n = 1; n < k.size(); ++n)
    if ((Q(k[n]) - Q(k[n - 1])).norm() > r(k[n]) + r(k[n - 1]) + d0 + tol) return false;
  return (s.q_final - Q(k.back())).norm() <= r(k.back()) + tol;
}

bool reach_holds(const Scenario& s, const FeasibilityCertificate& c) {
  const auto& w = *c.waypoints;
  const double d0 = s.vehicle.v_max * s.timing.slot;
  if (w.front() != s.q_start || w.back() != s.q_final) return false;
  for (std::size_t n = 1; n < w.size(); ++n)
    if ((w[n] - w[n - 1]).norm() > d0 * (1.0 + 1e-9)) return false;
  return true;
}

}  // namespace

TEST_CASE("single station at the midpoint is feasible on every slot") {
  const Scenario s = corridor(make_stations({{200.0, 0.0}}));
  const auto c = circle_graph_check(s);
  REQUIRE(c.feasible);
  CHECK(c.association->serving == std::vector<int>(10, 0));
  CHECK(chain_holds(s, c, 0.0));
  CHECK(reach_holds(s, c));
  CHECK(c.method == Method::circle_graph);
}

TEST_CASE("a station that cannot reach the threshold overhead is infeasible") {
  Scenario s = corridor(make_stations({{200.0, 0.0}}, 30.0));
  CHECK_FALSE(model::coverage_radius(s.stations[0].reference_snr(), s.gamma_min, 0.0, 50.0).has_value());
  CHECK_FALSE(circle_graph_check(s).feasible);
}

TEST_CASE("goal beyond every reachable disk is infeasible") {
  // r = 100 m around the start; the goal at 1000 m exceeds N·d0 + r = 850 m.
  Scenario s = corridor(make_stations({{0.0, 0.0}}, snr_db_for_radius(100.0, 2.0, 50.0)));
  s.q_final = Vec2(1000.0, 0.0);
  CHECK_FALSE(circle_graph_check(s).feasible);
  GridOptions g;
  g.grid_step = 10.0;
  CHECK_FALSE(grid_oracle_check(s, g).feasible);
}

TEST_CASE("zero threshold gives the straight line") {
  Scenario s = corridor(make_stations({{200.0, 50.0}, {-500.0, 0.0}}));
  s.gamma_min = 0.0;
  for (const auto& c : {circle_graph_check(s), grid_oracle_check(s)}) {
    REQUIRE(c.feasible);
    const auto& w = *c.waypoints;
    REQUIRE(w.size() == 11);
    for (int n = 0; n <= 10; ++n) CHECK((w[n] - Vec2(40.0 * n, 0.0)).norm() < 1e-9);
  }
}

TEST_CASE("no stations with a positive threshold is infeasible") {
  const Scenario s = corridor({});
  CHECK_FALSE(circle_graph_check(s).feasible);
  CHECK_FALSE(grid_oracle_check(s).feasible);
}

TEST_CASE("grid budget is enforced") {
  const Scenario s = corridor(make_stations({{200.0, 0.0}}));
  GridOptions g;
  g.cell_budget = 100;
  CHECK_THROWS_AS(grid_oracle_check(s, g), GridBudgetError);
}

TEST_CASE("grid oracle paths respect coverage and reach") {
  const Scenario s = map1_scenario();
  const auto c = grid_oracle_check(s);
  REQUIRE(c.feasible);
  CHECK(reach_holds(s, c));
  const RadioLayout radio = radio_layout(s);
  const auto& w = *c.waypoints;
  for (int n = 1; n <= s.timing.n_slots; ++n)
    CHECK(model::sinr(w[n], c.association->serving[n - 1], radio).sinr >= s.gamma_min);
}

TEST_CASE("grid oracle is monotone in the threshold") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    Scenario s = published_constants();
    s.timing = Timing{20.0, 5.0, 4};
    s.q_final = Vec2(200.0, 0.0);
    s.stations = make_stations({{100 + 150 * U(rng), 150 * U(rng)}, {100 + 150 * U(rng), 150 * U(rng)},
                                {100 + 150 * U(rng), 150 * U(rng)}},
                               70.0 + 5.0 * U(rng));
    GridOptions g;
    g.grid_step = 10.0;
    bool prev = false;
    for (double gamma : {8.0, 4.0, 2.0, 1.0, 0.5, 0.25, 0.0}) {
      s.gamma_min = gamma;
      const bool f = grid_oracle_check(s, g).feasible;
      CHECK((f || !prev));
      prev = f;
    }
    CHECK(prev);
  }
}

TEST_CASE("circle graph with the oracle bound implies chain inequalities") {
  const Scenario s = map1_scenario();
  const auto c = circle_graph_check(s, 0.0);
  REQUIRE(c.feasible);
  CHECK(chain_holds(s, c, 0.0));
  CHECK(reach_holds(s, c));
}

TEST_CASE("start reach never exceeds the kinematic envelope") {
  // Reference: integrate the bang-then-cruise speed profile finely.
  Scenario s = published_constants();
  for (double amax : {0.1, 1.0, 5.0}) {
    s.vehicle.a_max = amax;
    for (int n = 0; n <= 10; ++n) {
      double speed = s.vehicle.v0.norm(), dist = 0.0;
      const double dt = 1e-4;
      for (int i = 0; i < static_cast<int>(std::lround(n * s.timing.slot / dt)); ++i) {
        const double next = std::min(s.vehicle.v_max, speed + amax * dt);
        dist += 0.5 * (speed + next) * dt;
        speed = next;
      }
      const double r = feasibility::detail::start_reach(s, n);
      CHECK(r <= dist + 1e-6);
      if (s.vehicle.v0.norm() + amax * n * s.timing.slot <= s.vehicle.v_max) CHECK(std::abs(r - dist) < 1e-6);
    }
  }
}

TEST_CASE("initial trajectory from a straight line") {
  Scenario s = corridor(make_stations({{200.0, 0.0}}));
  s.gamma_min = 0.0;
  const auto c = circle_graph_check(s);
  const TrajectoryIterate it = initial_trajectory(c, s);
  const double T = s.timing.slot / 1.0;
  const double L = s.length_scale;
  REQUIRE(it.Q.size() == 11);
  for (int n = 1; n <= 10; ++n) {
    const Vec2 q = it.Q[n] * L, qp = it.Q[n - 1] * L, vp = it.v[n - 1] * L, a = it.a[n - 1] * L;
    CHECK((q - qp - vp * T - 0.5 * a * T * T).norm() <= 1e-9 * std::max(1.0, q.norm()));
    CHECK((it.v[n] * L - vp - a * T).norm() <= 1e-9 * std::max(1.0, vp.norm()));
    CHECK(it.v[n].norm() * L < s.vehicle.v_max);
    CHECK(a.norm() < s.vehicle.a_max);
    CHECK(it.alpha.row(n - 1).sum() == 1.0);
  }
  CHECK((it.Q[10] * L - s.q_final).norm() < 1e-9);
  for (int n = 0; n < 10; ++n) CHECK(it.theta(n) == std::max(it.v[n].norm(), 0.1 / L));
}

TEST_CASE("seed certificate on both bundled maps") {
  // The bundled seeds track the oracle path closely enough to exceed v_max
  // somewhere; the optimizer repairs them with a restoration phase. Here
  // only the reporting contract is checked.
  for (const Scenario& s : default_scenarios()) {
    const auto c = seed_certificate(s);
    REQUIRE(c.feasible);
    CHECK(reach_holds(s, c));
    const SeedFit f = fit_seed(c, s);
    CHECK(f.admissible == f.failure.empty());
    if (!f.admissible) CHECK_THROWS_AS(initial_trajectory(c, s), InitializationError);
    const RadioLayout radio = radio_layout(s);
    for (int n = 1; n <= s.timing.n_slots; ++n)
      CHECK(model::sinr((*c.waypoints)[n], c.association->serving[n - 1], radio).sinr >= s.gamma_min);
  }
}

TEST_CASE("initial trajectory refuses an infeasible certificate") {
  const Scenario s = corridor({});
  CHECK_THROWS_AS(initial_trajectory(circle_graph_check(s), s), InitializationError);
}
