#include "skyplan/sca.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace skyplan;

namespace {

Scenario easy_corridor() {
  Scenario s = published_constants();
  s.q_final = Vec2(400.0, 0.0);
  s.stations = make_stations({{200.0, 30.0}, {-1500.0, 0.0}, {200.0, 2000.0}});
  s.stations[1].reference_snr_db = 60.0;
  s.stations[2].reference_snr_db = 60.0;
  s.vehicle.v0 = Vec2(8.0, 0.0);
  validate(s);
  return s;
}

// Distance from p to the segment [a, b], written out independently.
double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  double u = (p - a).dot(ab) / ab.squaredNorm();
  u = std::min(1.0, std::max(0.0, u));
  return (p - (a + u * ab)).norm();
}

// Re-derives every validation field from the trace alone.
void check_trace(const sca::TrajectoryTrace& tr, const Scenario& s) {
  const RadioLayout radio = radio_layout(s);
  const PowerCoefficients phys{s.vehicle.c1, s.vehicle.c2, s.vehicle.gravity, 0.0};
  const double T = s.timing.slot;
  REQUIRE(static_cast<int>(tr.slots.size()) == s.timing.n_slots);
  Vec2 q = s.q_start, v = s.vehicle.v0;
  double min_sinr = 1e300, power = 0.0;
  for (const auto& r : tr.slots) {
    CHECK((r.position - q - v * T - 0.5 * r.acceleration * T * T).norm() <= 1e-6);
    CHECK((r.velocity - v - r.acceleration * T).norm() * T <= 1e-6);
    CHECK(r.velocity.norm() <= s.vehicle.v_max + 1e-6);
    CHECK(r.acceleration.norm() <= s.vehicle.a_max + 1e-6);
    const double sinr = model::sinr(r.position, r.serving_gbs - 1, radio).sinr;
    CHECK(std::abs(sinr - r.sinr) <= 1e-9 * sinr);
    min_sinr = std::min(min_sinr, sinr);
    CHECK(std::abs(r.power_W - model::propulsion_power(v, r.acceleration, phys)) <= 1e-9 * r.power_W);
    power += r.power_W;
    q = r.position;
    v = r.velocity;
  }
  CHECK((q - s.q_final).norm() <= 1e-3);
  CHECK(std::abs(tr.validation.min_serving_sinr - min_sinr) <= 1e-9 * min_sinr);
  CHECK(std::abs(tr.power_W_sum - power) <= 1e-9 * power);
  CHECK(std::abs(tr.energy_J - power * T) <= 1e-9 * power * T);
}

}  // namespace

TEST_CASE("penalty schedule") {
  sca::ScaConfig cfg;
  CHECK(sca::lambda_at(cfg, 1e5, 1) == 1e5);
  cfg.lambda_schedule = sca::LambdaSchedule::geometric;
  CHECK(sca::lambda_at(cfg, 1e5, 1) == Catch::Approx(10.0));
  CHECK(sca::lambda_at(cfg, 1e5, 3) == Catch::Approx(1e3));
  CHECK(sca::lambda_at(cfg, 1e5, 5) == 1e5);
  CHECK(sca::lambda_at(cfg, 1e5, 40) == 1e5);
}

TEST_CASE("binary gap") {
  MatrixXd a(2, 3);
  a << 1.0, 0.0, 0.0, 0.2, 0.7, 0.1;
  CHECK(sca::max_binary_gap(a) == Catch::Approx(0.3));
  CHECK(sca::max_binary_gap(MatrixXd::Identity(3, 3)) == 0.0);
}

TEST_CASE("chord deviation") {
  sca::TrajectoryTrace tr;
  tr.start = Vec2(0, 0);
  for (int n = 1; n <= 4; ++n) {
    sca::SlotRecord r;
    r.position = Vec2(100.0 * n, n == 2 ? 30.0 : 0.0);
    tr.slots.push_back(r);
  }
  CHECK(sca::chord_deviation(tr, Vec2(0, 0), Vec2(400, 0)) == Catch::Approx(30.0));
}

TEST_CASE("run on an easy corridor converges to a validated binary solution") {
  const Scenario s = easy_corridor();
  const sca::ScaResult r = sca::run(s);
  REQUIRE(r.converged);
  check_trace(r.trace, s);
  CHECK_FALSE(r.trace.validation.connectivity_violated);
  CHECK(r.trace.validation.max_binary_gap <= 1e-3);
  CHECK(r.trace.validation.min_serving_sinr >= s.gamma_min * (1 - 1e-3));
  for (std::size_t i = 1; i < r.reports.size(); ++i)
    CHECK(r.reports[i].exact_objective <= r.reports[i - 1].exact_objective + 1e-6 * std::abs(r.reports[i - 1].exact_objective));
  for (const auto& rep : r.reports) CHECK(rep.kkt.max() <= 1e-8);
}

TEST_CASE("zero threshold run and its chord deviation") {
  Scenario s = easy_corridor();
  s.gamma_min = 0.0;
  const sca::ScaResult free = sca::run(s);
  REQUIRE(free.converged);
  check_trace(free.trace, s);
  double dev = 0.0;
  for (const auto& p : free.trace.positions()) dev = std::max(dev, seg_dist(p, s.q_start, s.q_final));
  CHECK(dev == Catch::Approx(sca::chord_deviation(free.trace, s.q_start, s.q_final)));
}

TEST_CASE("infeasible scenarios are reported with a certificate") {
  Scenario s = easy_corridor();
  s.stations = make_stations({{0.0, 0.0}}, 44.0);  // coverage radius ~ 100 m
  try {
    sca::run(s);
    FAIL("expected InfeasibleScenario");
  } catch (const sca::InfeasibleScenario& e) {
    CHECK_FALSE(e.certificate.feasible);
  }
}

TEST_CASE("validation flags a trajectory that misses the threshold") {
  const Scenario s = easy_corridor();
  const sca::ScaResult r = sca::run(s);
  Scenario harder = s;
  harder.gamma_min = 2.0 * r.trace.validation.min_serving_sinr;
  const auto tr = sca::round_and_validate(r.final_iterate, harder);
  CHECK(tr.validation.connectivity_violated);
  const auto ok = sca::round_and_validate(r.final_iterate, s);
  CHECK_FALSE(ok.validation.connectivity_violated);
}

TEST_CASE("sweep warm-starts and reports every threshold") {
  const Scenario s = easy_corridor();
  const auto rows = sca::gamma_sweep(s, {0.5, 1.0, 2.0});
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(row.feasible);
    CHECK(row.converged);
    CHECK(row.min_serving_sinr >= row.gamma_min * (1 - 1e-3));
  }
  // The threshold is slack everywhere, so each warm start is admissible and
  // the monotone iteration can only lower the power.
  CHECK(rows[0].min_serving_sinr > 100.0);
  CHECK(rows[1].power_W_sum <= rows[0].power_W_sum + 1e-6);
  CHECK(rows[2].power_W_sum <= rows[1].power_W_sum + 1e-6);
}
