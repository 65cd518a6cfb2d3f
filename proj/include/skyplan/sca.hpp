#pragma once

// Successive convex approximation: repeatedly assemble the convex surrogate
// around the current iterate, solve it, and move toward its minimizer while
// keeping the next surrogate strictly feasible.

#include "skyplan/feasibility.hpp"
#include "skyplan/model.hpp"
#include "skyplan/scenario.hpp"
#include "skyplan/solver.hpp"
#include "skyplan/surrogate.hpp"
#include "skyplan/types.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace skyplan::sca {

enum class LambdaSchedule { fixed, geometric };

struct ScaConfig {
  double epsilon = 1e-4;
  int max_iterations = 50;
  LambdaSchedule lambda_schedule = LambdaSchedule::fixed;
  /// Largest association weight below which a slot's rounding is flagged.
  double rounding_threshold = 0.5;
  /// A run counts as binary when every min(α, 1 − α) is below this.
  double binary_tolerance = 1e-3;
  /// Smallest step toward the subproblem minimizer before giving up.
  double min_step_fraction = 1.0 / 1024.0;
  solver::SolverConfig solver;
  SurrogateOptions surrogate;
  feasibility::InitOptions init;
};

struct SolveReport {
  int iteration = 0;
  double penalty_lambda = 0.0;
  double surrogate_objective = 0.0;
  double exact_objective = 0.0;
  double power_W = 0.0;
  double penalty_residual = 0.0;
  double max_binary_gap = 0.0;
  /// Fraction of the way to the subproblem minimizer that was taken.
  double step_fraction = 1.0;
  solver::SolveStatus status = solver::SolveStatus::optimal;
  solver::KktResiduals kkt;
  int newton_iterations = 0;
  int barrier_stages = 0;
  double wall_seconds = 0.0;
};

/// State at t_n (n = 1..N) together with the control applied over
/// [t_{n−1}, t_n].
struct SlotRecord {
  int n = 0;
  double t = 0.0;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 acceleration = Vec2::Zero();
  double power_W = 0.0;
  int serving_gbs = 0;
  double sinr = 0.0;
};

struct TraceValidation {
  double min_serving_sinr = 0.0;
  double endpoint_error_m = 0.0;
  bool connectivity_violated = false;
  double speed_margin = 0.0;
  double accel_margin = 0.0;
  double max_dynamics_residual_m = 0.0;
  double max_binary_gap = 0.0;
  bool ambiguous_rounding = false;
};

struct TrajectoryTrace {
  Vec2 start = Vec2::Zero();
  Vec2 start_velocity = Vec2::Zero();
  std::vector<SlotRecord> slots;
  double power_W_sum = 0.0;
  double energy_J = 0.0;
  TraceValidation validation;

  std::vector<Vec2> positions() const {
    std::vector<Vec2> p{start};
    for (const auto& r : slots) p.push_back(r.position);
    return p;
  }
};

struct ScaResult {
  TrajectoryTrace trace;
  std::vector<SolveReport> reports;
  bool converged = false;
  feasibility::FeasibilityCertificate certificate;
  TrajectoryIterate final_iterate;
};

class InfeasibleScenario : public std::runtime_error {
 public:
  InfeasibleScenario(const std::string& what, feasibility::FeasibilityCertificate cert)
      : std::runtime_error(what), certificate(std::move(cert)) {}
  feasibility::FeasibilityCertificate certificate;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, std::vector<SolveReport> partial)
      : std::runtime_error(what), reports(std::move(partial)) {}
  std::vector<SolveReport> reports;
};

inline double max_binary_gap(const MatrixXd& alpha) {
  if (alpha.size() == 0) return 0.0;
  return alpha.array().min(1.0 - alpha.array()).maxCoeff();
}

inline double lambda_at(const ScaConfig& cfg, double lambda, int iteration) {
  if (cfg.lambda_schedule == LambdaSchedule::fixed) return lambda;
  const int shortfall = std::max(0, 4 - (iteration - 1));
  return lambda * std::pow(10.0, -shortfall);
}

/// Replace ρ by the true squared distances at the iterate's positions.
inline void relink_rho(TrajectoryIterate& it, const ScaledScenario& s) {
  for (int n = 1; n <= it.slots(); ++n)
    for (int j = 0; j < it.stations(); ++j)
      it.rho(n - 1, j) = model::squared_distance(it.Q[n], s.radio.positions[j], s.radio.altitude);
}

/// Round the association and evaluate the trajectory with the true SINR and
/// the true propulsion power (θ = ‖v‖). Output in meters.
inline TrajectoryTrace round_and_validate(const TrajectoryIterate& it, const Scenario& s,
                                          double rounding_threshold = 0.5) {
  const double L = s.length_scale;
  const int N = it.slots();
  const RadioLayout radio = radio_layout(s);
  const PowerCoefficients c{s.vehicle.c1, s.vehicle.c2, s.vehicle.gravity, 0.0};

  TrajectoryTrace tr;
  tr.start = it.Q[0] * L;
  tr.start_velocity = it.v[0] * L;
  double min_sinr = std::numeric_limits<double>::infinity();
  double max_speed = it.v[0].norm() * L, max_accel = 0.0, max_resid = 0.0;
  for (int n = 1; n <= N; ++n) {
    SlotRecord r;
    r.n = n;
    r.t = n * s.timing.slot;
    r.position = it.Q[n] * L;
    r.velocity = it.v[n] * L;
    r.acceleration = it.a[n - 1] * L;
    r.power_W = model::propulsion_power(it.v[n - 1] * L, r.acceleration, c);
    int k = 0;
    if (it.stations() > 0) {
      it.alpha.row(n - 1).maxCoeff(&k);
      if (it.alpha(n - 1, k) < rounding_threshold) tr.validation.ambiguous_rounding = true;
      r.serving_gbs = s.stations[k].id;
      r.sinr = model::sinr(r.position, k, radio).sinr;
      min_sinr = std::min(min_sinr, r.sinr);
    }
    tr.power_W_sum += r.power_W;
    max_speed = std::max(max_speed, r.velocity.norm());
    max_accel = std::max(max_accel, r.acceleration.norm());
    const double T = s.timing.slot;
    const Vec2 q_prev = it.Q[n - 1] * L, v_prev = it.v[n - 1] * L;
    max_resid = std::max(max_resid, (r.position - q_prev - v_prev * T - 0.5 * r.acceleration * T * T).norm());
    max_resid = std::max(max_resid, (r.velocity - v_prev - r.acceleration * T).norm() * T);
    tr.slots.push_back(r);
  }
  tr.energy_J = tr.power_W_sum * s.timing.slot;
  auto& val = tr.validation;
  val.min_serving_sinr = std::isfinite(min_sinr) ? min_sinr : 0.0;
  val.endpoint_error_m = (it.Q[N] * L - s.q_final).norm();
  val.connectivity_violated = it.stations() > 0 && val.min_serving_sinr < s.gamma_min * (1.0 - 1e-3);
  val.speed_margin = s.vehicle.v_max - max_speed;
  val.accel_margin = s.vehicle.a_max - max_accel;
  val.max_dynamics_residual_m = max_resid;
  val.max_binary_gap = max_binary_gap(it.alpha);
  return tr;
}

/// Largest distance from a trajectory position to the start→goal segment.
inline double chord_deviation(const TrajectoryTrace& tr, const Vec2& start, const Vec2& goal) {
  double worst = 0.0;
  for (const auto& r : tr.slots) worst = std::max(worst, feasibility::detail::distance_to_segment(r.position, start, goal));
  return worst;
}

/// Whether `it` can serve as an expansion point for scenario `s`.
inline bool admissible_expansion(const TrajectoryIterate& it, const ScaledScenario& s, const SurrogateOptions& opt) {
  try {
    (void)assemble(it, s, opt);
    return true;
  } catch (const AssemblyError&) {
    return false;
  }
}

/// Largest normalized violation of the true constraints at an iterate:
/// γα_j/SINR_j − 1, ‖v‖²/v_max² − 1 and ‖a‖²/a_max² − 1. Negative means
/// every constraint holds with room to spare.
inline double true_violation(const TrajectoryIterate& it, const ScaledScenario& s) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= it.slots(); ++n) {
    worst = std::max(worst, it.v[n].squaredNorm() / (s.v_max * s.v_max) - 1.0);
    worst = std::max(worst, it.a[n - 1].squaredNorm() / (s.a_max * s.a_max) - 1.0);
    if (s.gamma_min <= 0.0) continue;
    for (int j = 0; j < it.stations(); ++j) {
      const double q = model::sinr(it.Q[n], j, s.radio).sinr;
      worst = std::max(worst, s.gamma_min * it.alpha(n - 1, j) / q - 1.0);
    }
  }
  return worst;
}

/// Drive the true violation of SINR, speed and acceleration below zero with
/// the association held fixed, by SCA on the phase-one subproblem. Steps are
/// damped until the true violation decreases, since the affine distance link
/// underestimates squared distances by the squared displacement.
inline TrajectoryIterate restore_feasibility(TrajectoryIterate exp, const ScaledScenario& scaled,
                                             const SurrogateOptions& sopt, int max_iterations = 40) {
  const PhaseOneOptions p1;
  double viol = true_violation(exp, scaled);
  for (int t = 1; t <= max_iterations; ++t) {
    if (admissible_expansion(exp, scaled, sopt)) return exp;
    const ConvexSubproblem sub = assemble_phase_one(exp, scaled, sopt, p1);
    const solver::SolverResult res = solver::solve(sub.problem, sub.warm_start, solver::SolverConfig{});
    if (res.status == solver::SolveStatus::numerical_failure)
      throw SolverFailure("feasibility restoration failed: " + res.diagnostic, {});
    const VectorXd x0 = sub.warm_start.head(sub.layout.size());
    const VectorXd dx = res.x_star.head(sub.layout.size()) - x0;
    std::optional<TrajectoryIterate> next;
    double next_viol = viol;
    for (double tau = 1.0; tau >= 1.0 / 64.0; tau *= 0.5) {
      TrajectoryIterate cand = sub.layout.unpack(x0 + tau * dx);
      relink_rho(cand, scaled);
      for (int n = 0; n < cand.slots(); ++n)
        cand.theta(n) = std::max(std::min(cand.theta(n), cand.v[n].norm() * (1.0 - 1e-9)), scaled_theta_min(sopt, scaled));
      const double cv = true_violation(cand, scaled);
      if (cv < viol) {
        next = std::move(cand);
        next_viol = cv;
        break;
      }
    }
    spdlog::debug("restoration iter {}: slack {:.6g} violation {:.6g} status {}", t, res.x_star(sub.layout.size()),
                  next_viol, solver::to_string(res.status));
    if (!next) break;
    exp = std::move(*next);
    viol = next_viol;
  }
  try {
    (void)assemble(exp, scaled, sopt);
    return exp;
  } catch (const AssemblyError& e) {
    throw SolverFailure(std::string("could not construct a strictly feasible starting trajectory: ") + e.what(), {});
  }
}

inline ScaResult run(const Scenario& s, const ScaConfig& cfg = {},
                     const std::optional<TrajectoryIterate>& warm = std::nullopt) {
  ScaledScenario scaled = nondimensionalize(s);
  SurrogateOptions sopt = cfg.surrogate;
  sopt.theta_min = cfg.init.theta_min;

  ScaResult result;
  TrajectoryIterate exp;
  if (warm && admissible_expansion(*warm, scaled, sopt)) {
    exp = *warm;
    result.certificate.feasible = true;
    result.certificate.method = feasibility::Method::grid_oracle;
    result.certificate.note = "warm start";
  } else {
    result.certificate = feasibility::seed_certificate(s, cfg.init);
    if (!result.certificate.feasible)
      throw InfeasibleScenario("scenario is connectivity-infeasible: " + result.certificate.note, result.certificate);
    feasibility::SeedFit fit;
    try {
      fit = feasibility::fit_seed(result.certificate, s, cfg.init);
    } catch (const feasibility::InitializationError& e) {
      throw SolverFailure(std::string("no usable starting trajectory: ") + e.what(), {});
    }
    exp = fit.admissible ? std::move(fit.iterate) : restore_feasibility(std::move(fit.iterate), scaled, sopt);
  }

  double prev_value = std::numeric_limits<double>::quiet_NaN();
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    scaled.penalty_lambda = lambda_at(cfg, s.penalty_lambda, t);
    ConvexSubproblem sub;
    try {
      sub = assemble(exp, scaled, sopt);
    } catch (const AssemblyError& e) {
      throw SolverFailure(std::string("subproblem assembly failed: ") + e.what(), result.reports);
    }
    const solver::SolverResult res = solver::solve(sub.problem, sub.warm_start, cfg.solver);

    SolveReport rep;
    rep.iteration = t;
    rep.penalty_lambda = scaled.penalty_lambda;
    rep.status = res.status;
    rep.kkt = res.kkt;
    rep.newton_iterations = res.newton_iterations_total;
    rep.barrier_stages = res.barrier_stages;
    if (res.status == solver::SolveStatus::numerical_failure) {
      rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      result.reports.push_back(rep);
      throw SolverFailure("subproblem " + std::to_string(t) + " failed: " + res.diagnostic, result.reports);
    }

    // Move toward the minimizer, halving the step until the true squared
    // distances keep the next surrogate strictly feasible.
    const VectorXd& x0 = sub.warm_start;
    const VectorXd dx = res.x_star - x0;
    double tau = 1.0;
    std::optional<TrajectoryIterate> next;
    while (tau >= cfg.min_step_fraction) {
      TrajectoryIterate cand = sub.layout.unpack(x0 + tau * dx);
      relink_rho(cand, scaled);
      if (admissible_expansion(cand, scaled, sopt)) {
        next = std::move(cand);
        break;
      }
      tau *= 0.5;
    }
    if (!next) {
      rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      result.reports.push_back(rep);
      throw SolverFailure("no step toward subproblem " + std::to_string(t) +
                              " keeps the next surrogate strictly feasible",
                          result.reports);
    }

    rep.step_fraction = tau;
    rep.surrogate_objective = surrogate_objective_value(*next, exp, scaled);
    rep.exact_objective = exact_penalized_objective(*next, scaled);
    rep.power_W = power_objective(*next, scaled);
    rep.penalty_residual = penalty_residual(next->alpha);
    rep.max_binary_gap = max_binary_gap(next->alpha);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.reports.push_back(rep);
    spdlog::debug("sca iter {}: surrogate {:.9g} exact {:.9g} step {:.4g} newton {} status {}", t,
                  rep.surrogate_objective, rep.exact_objective, tau, rep.newton_iterations,
                  solver::to_string(rep.status));
    exp = std::move(*next);

    const bool full_lambda = scaled.penalty_lambda >= s.penalty_lambda;
    if (full_lambda && std::isfinite(prev_value) &&
        std::abs(rep.surrogate_objective - prev_value) / std::max(std::abs(prev_value), 1.0) < cfg.epsilon) {
      result.converged = true;
      break;
    }
    prev_value = full_lambda ? rep.surrogate_objective : std::numeric_limits<double>::quiet_NaN();
  }
  if (!result.converged) spdlog::warn("sca stopped after {} iterations without meeting epsilon", cfg.max_iterations);

  result.final_iterate = exp;
  result.trace = round_and_validate(exp, s, cfg.rounding_threshold);
  return result;
}

struct SweepRow {
  double gamma_min = 0.0;
  bool feasible = false;
  bool converged = false;
  int iterations = 0;
  double power_W_sum = 0.0;
  double energy_J = 0.0;
  double chord_deviation_m = 0.0;
  double min_serving_sinr = 0.0;
  std::string error;
  std::optional<TrajectoryTrace> trace;
};

/// Solve the scenario for each threshold, warm-starting from the previous
/// solution whenever it is strictly feasible for the next threshold.
inline std::vector<SweepRow> gamma_sweep(const Scenario& base, const std::vector<double>& gammas,
                                         const ScaConfig& cfg = {}) {
  std::vector<SweepRow> rows;
  std::optional<TrajectoryIterate> warm;
  for (double g : gammas) {
    Scenario s = base;
    s.gamma_min = g;
    SweepRow row;
    row.gamma_min = g;
    try {
      const ScaResult r = run(s, cfg, warm);
      row.feasible = true;
      row.converged = r.converged;
      row.iterations = static_cast<int>(r.reports.size());
      row.power_W_sum = r.trace.power_W_sum;
      row.energy_J = r.trace.energy_J;
      row.chord_deviation_m = chord_deviation(r.trace, s.q_start, s.q_final);
      row.min_serving_sinr = r.trace.validation.min_serving_sinr;
      row.trace = r.trace;
      warm = r.final_iterate;
    } catch (const InfeasibleScenario& e) {
      row.error = e.what();
    } catch (const SolverFailure& e) {
      row.feasible = true;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace skyplan::sca
