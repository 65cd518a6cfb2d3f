#pragma once

// Convex subproblem built around an expansion point (the previous SCA
// iterate). All quantities are in the nondimensionalized units of
// ScaledScenario.

#include "skyplan/model.hpp"
#include "skyplan/scenario.hpp"
#include "skyplan/solver.hpp"
#include "skyplan/types.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace skyplan {

/// One SCA iterate on the slot grid n = 0..N.
///   Q, v : N+1 entries (n = 0..N)
///   a    : N entries, a[n] acts over [t_n, t_{n+1}]
///   alpha, rho : N × J, row n-1 belongs to slot n = 1..N
///   theta: N entries paired with v[n], n = 0..N-1
struct TrajectoryIterate {
  std::vector<Vec2> Q;
  std::vector<Vec2> v;
  std::vector<Vec2> a;
  MatrixXd alpha;
  VectorXd theta;
  MatrixXd rho;

  int slots() const { return static_cast<int>(a.size()); }
  int stations() const { return static_cast<int>(alpha.cols()); }
};

using ExpansionPoint = TrajectoryIterate;

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flattened variable indices for (Q, v, a, α, θ, ρ).
struct VariableLayout {
  int N = 0;
  int J = 0;

  VariableLayout() = default;
  VariableLayout(int slots, int stations) : N(slots), J(stations) {}

  int q(int n, int d) const { return 2 * n + d; }
  int v(int n, int d) const { return 2 * (N + 1) + 2 * n + d; }
  int a(int n, int d) const { return 4 * (N + 1) + 2 * n + d; }
  int alpha(int n, int j) const { return 4 * (N + 1) + 2 * N + (n - 1) * J + j; }
  int theta(int n) const { return 4 * (N + 1) + 2 * N + N * J + n; }
  int rho(int n, int j) const { return 4 * (N + 1) + 2 * N + N * J + N + (n - 1) * J + j; }
  int size() const { return 4 * (N + 1) + 2 * N + 2 * N * J + N; }

  VectorXd pack(const TrajectoryIterate& it) const {
    VectorXd x(size());
    for (int n = 0; n <= N; ++n)
      for (int d = 0; d < 2; ++d) {
        x(q(n, d)) = it.Q[n](d);
        x(v(n, d)) = it.v[n](d);
      }
    for (int n = 0; n < N; ++n) {
      for (int d = 0; d < 2; ++d) x(a(n, d)) = it.a[n](d);
      x(theta(n)) = it.theta(n);
    }
    for (int n = 1; n <= N; ++n)
      for (int j = 0; j < J; ++j) {
        x(alpha(n, j)) = it.alpha(n - 1, j);
        x(rho(n, j)) = it.rho(n - 1, j);
      }
    return x;
  }

  TrajectoryIterate unpack(const VectorXd& x) const {
    TrajectoryIterate it;
    it.Q.resize(N + 1);
    it.v.resize(N + 1);
    it.a.resize(N);
    it.alpha.resize(N, J);
    it.rho.resize(N, J);
    it.theta.resize(N);
    for (int n = 0; n <= N; ++n) {
      it.Q[n] = Vec2(x(q(n, 0)), x(q(n, 1)));
      it.v[n] = Vec2(x(v(n, 0)), x(v(n, 1)));
    }
    for (int n = 0; n < N; ++n) {
      it.a[n] = Vec2(x(a(n, 0)), x(a(n, 1)));
      it.theta(n) = x(theta(n));
    }
    for (int n = 1; n <= N; ++n)
      for (int j = 0; j < J; ++j) {
        it.alpha(n - 1, j) = x(alpha(n, j));
        it.rho(n - 1, j) = x(rho(n, j));
      }
    return it;
  }
};

struct SurrogateOptions {
  /// θ ≥ θ_min, in m/s (scaled internally).
  double theta_min = 0.1;
  /// ρ ≥ ρ_min; empty means (0.5 H)² in the scenario's scaled units.
  std::optional<double> rho_min;
  /// Optional ‖Q[n] − Q^{t−1}[n]‖ ≤ Δ, Δ in meters; off by default.
  std::optional<double> trust_radius;
};

/// Feasibility-restoration variant of the subproblem: the association is
/// pinned by equalities and a scalar slack s relaxes the SINR, speed and
/// acceleration constraints (each normalized to O(1)). The objective is
/// weight·s plus the power, with s ≥ −slack_floor.
struct PhaseOneOptions {
  double weight = 1e2;
  double slack_floor = 0.05;
  /// Power is kept only as a small regularizer while restoring feasibility.
  double power_weight = 1e-3;
};

inline double scaled_theta_min(const SurrogateOptions& o, const ScaledScenario& s) {
  return o.theta_min / s.length_scale;
}

inline double scaled_rho_min(const SurrogateOptions& o, const ScaledScenario& s) {
  if (o.rho_min) return *o.rho_min;
  const double half_h = 0.5 * s.radio.altitude;
  return half_h * half_h;
}

// ---------------------------------------------------------------------------
// Individual surrogates

/// Tangent-plane lower bound of α² + ρ² at (α', ρ').
inline double bilinear_lower_bound(double alpha, double rho, double alpha_prev, double rho_prev) {
  return alpha_prev * alpha_prev + rho_prev * rho_prev + 2.0 * alpha_prev * (alpha - alpha_prev) +
         2.0 * rho_prev * (rho - rho_prev);
}

/// Linearized squared distance: ‖Q' − Q_j‖² + H² + 2(Q' − Q_j)ᵀ(Q − Q').
inline double rho_affine_link(const Vec2& q, const Vec2& q_prev, const Vec2& station, double altitude) {
  const Vec2 d = q_prev - station;
  return d.squaredNorm() + altitude * altitude + 2.0 * d.dot(q - q_prev);
}

/// θ² − (‖v'‖² + 2v'ᵀ(v − v')) over local variables (vx, vy, θ).
inline solver::LocalEval theta_speed_constraint(const Vec2& v, double theta, const Vec2& v_prev) {
  solver::LocalEval e;
  e.value = theta * theta - (v_prev.squaredNorm() + 2.0 * v_prev.dot(v - v_prev));
  e.gradient.resize(3);
  e.gradient << -2.0 * v_prev.x(), -2.0 * v_prev.y(), 2.0 * theta;
  e.hessian = MatrixXd::Zero(3, 3);
  e.hessian(2, 2) = 2.0;
  return e;
}

/// (γ/2h_j)[(α_j + ρ_j)² − g(ρ_j, α_j)] − f_j(ρ) over local variables
/// (α_j, ρ_0, …, ρ_{J−1}).
inline solver::LocalEval sinr_surrogate_constraint(double alpha, const VectorXd& rho, int j, double alpha_prev,
                                                   double rho_prev, double gamma_min,
                                                   const std::vector<double>& snr) {
  const int J = static_cast<int>(rho.size());
  const double k = gamma_min / (2.0 * snr[j]);
  const double sum = alpha + rho(j);
  const auto fj = model::f_j_gradient_hessian({rho.data(), static_cast<std::size_t>(J)}, j, snr);

  solver::LocalEval e;
  e.value = k * (sum * sum - bilinear_lower_bound(alpha, rho(j), alpha_prev, rho_prev)) - fj.value;
  e.gradient = VectorXd::Zero(J + 1);
  e.hessian = MatrixXd::Zero(J + 1, J + 1);
  e.gradient(0) = k * (2.0 * sum - 2.0 * alpha_prev);
  e.gradient(1 + j) = k * (2.0 * sum - 2.0 * rho_prev);
  e.hessian(0, 0) = 2.0 * k;
  e.hessian(0, 1 + j) = 2.0 * k;
  e.hessian(1 + j, 0) = 2.0 * k;
  e.hessian(1 + j, 1 + j) = 2.0 * k;
  for (int a = 0, ia = 0; a < J; ++a) {
    if (a == j) continue;
    e.gradient(1 + a) -= fj.gradient(ia);
    for (int b = 0, ib = 0; b < J; ++b) {
      if (b == j) continue;
      e.hessian(1 + a, 1 + b) -= fj.hessian(ia, ib);
      ++ib;
    }
    ++ia;
  }
  return e;
}

/// Same bound with the squared term evaluated at the exact squared distance
/// r(q) = ‖q − u_j‖² + H² instead of the linked ρ_j, and with the ρ axis
/// rescaled by c² = scale: αρ ≤ ½[(cα + ρ/c)² − c²α² − ρ²/c²] for any c > 0.
/// Local variables are (α_j, ρ_0, …, ρ_{J−1}, q_x, q_y). Since the linked ρ_j
/// never exceeds r(q), this upper-bounds (γ/h_j) α_j r(q) − f_j(ρ) and stays
/// convex. With scale = 1 the split is the unscaled one.
inline solver::LocalEval sinr_surrogate_constraint_exact(double alpha, const VectorXd& rho, const Vec2& q,
                                                         const Vec2& station, double altitude, int j,
                                                         double alpha_prev, double rho_prev, double gamma_min,
                                                         const std::vector<double>& snr, double scale = 1.0) {
  if (!(scale > 0.0)) throw std::domain_error("surrogate scale must be positive");
  const int J = static_cast<int>(rho.size());
  const double k = gamma_min / (2.0 * snr[j]);
  const Vec2 d = q - station;
  const double r = d.squaredNorm() + altitude * altitude;
  const double u = scale * alpha + r;  // c·(cα + r/c)
  const double lin_alpha = alpha_prev * alpha_prev + 2.0 * alpha_prev * (alpha - alpha_prev);
  const double lin_rho = rho_prev * rho_prev + 2.0 * rho_prev * (rho(j) - rho_prev);
  const auto fj = model::f_j_gradient_hessian({rho.data(), static_cast<std::size_t>(J)}, j, snr);

  solver::LocalEval e;
  e.value = k * (u * u / scale - scale * lin_alpha - lin_rho / scale) - fj.value;
  e.gradient = VectorXd::Zero(J + 3);
  e.hessian = MatrixXd::Zero(J + 3, J + 3);
  e.gradient(0) = 2.0 * k * (u - scale * alpha_prev);
  e.gradient(1 + j) = -2.0 * k * rho_prev / scale;
  e.gradient.tail<2>() = (4.0 * k * u / scale) * d;
  e.hessian(0, 0) = 2.0 * k * scale;
  e.hessian.block<1, 2>(0, J + 1) = 4.0 * k * d.transpose();
  e.hessian.block<2, 1>(J + 1, 0) = 4.0 * k * d;
  e.hessian.bottomRightCorner<2, 2>() =
      (k / scale) * (8.0 * d * d.transpose() + 4.0 * u * Eigen::Matrix2d::Identity());
  for (int a = 0, ia = 0; a < J; ++a) {
    if (a == j) continue;
    e.gradient(1 + a) -= fj.gradient(ia);
    for (int b = 0, ib = 0; b < J; ++b) {
      if (b == j) continue;
      e.hessian(1 + a, 1 + b) -= fj.hessian(ia, ib);
      ++ib;
    }
    ++ia;
  }
  return e;
}

/// Pre-linearization SINR constraint f_j(ρ) ≥ (γ/h_j) α_j ρ_j, as the
/// signed value (γ/h_j) α_j ρ_j − f_j(ρ) (≤ 0 when satisfied).
inline double sinr_slack_constraint(double alpha, const VectorXd& rho, int j, double gamma_min,
                                    const std::vector<double>& snr) {
  return gamma_min / snr[j] * alpha * rho(j) -
         model::f_j({rho.data(), static_cast<std::size_t>(rho.size())}, j, snr);
}

// ---------------------------------------------------------------------------
// Objectives

inline double penalty_residual(const MatrixXd& alpha) { return (alpha.array() - alpha.array().square()).sum(); }

inline double power_objective(const TrajectoryIterate& it, const ScaledScenario& s) {
  double total = 0.0;
  for (int n = 0; n < it.slots(); ++n)
    total += model::power_gradient_hessian(it.v[n], it.a[n], it.theta(n), s.power).value;
  return total;
}

/// P(v, a, θ) + λ Σ (α − α²).
inline double exact_penalized_objective(const TrajectoryIterate& it, const ScaledScenario& s) {
  return power_objective(it, s) + s.penalty_lambda * penalty_residual(it.alpha);
}

/// P(v, a, θ) + λ Σ α − λ Σ [α'² + 2α'(α − α')]: the concave −α² part is
/// replaced by its tangent, so the value never falls below the exact
/// penalized objective.
inline double surrogate_objective_value(const TrajectoryIterate& it, const ExpansionPoint& exp,
                                        const ScaledScenario& s) {
  const auto& ap = exp.alpha.array();
  const double penalty = (it.alpha.array() - ap.square() - 2.0 * ap * (it.alpha.array() - ap)).sum();
  return power_objective(it, s) + s.penalty_lambda * penalty;
}

// ---------------------------------------------------------------------------
// Assembly

struct ConvexSubproblem {
  solver::ConvexProblem problem;
  VariableLayout layout;
  /// The expansion point, nudged into the strict interior of the bounds and
  /// of the θ-speed surrogate when it sits exactly on them.
  VectorXd warm_start;
};

namespace detail {

inline void check_shapes(const ExpansionPoint& e, const ScaledScenario& s) {
  const int N = s.n_slots, J = s.station_count();
  if (static_cast<int>(e.Q.size()) != N + 1 || static_cast<int>(e.v.size()) != N + 1 ||
      static_cast<int>(e.a.size()) != N || e.alpha.rows() != N || e.alpha.cols() != J || e.rho.rows() != N ||
      e.rho.cols() != J || e.theta.size() != N)
    throw AssemblyError("expansion point shape does not match the scenario (N, J)");
}

}  // namespace detail

namespace detail {

inline ConvexSubproblem build_subproblem(const ExpansionPoint& exp, const ScaledScenario& s,
                                         const SurrogateOptions& opt, const PhaseOneOptions* phase_one) {
  check_shapes(exp, s);
  const int N = s.n_slots, J = s.station_count();
  const double T = s.slot;
  const double H = s.radio.altitude;
  const double theta_min = scaled_theta_min(opt, s);
  const double rho_min = scaled_rho_min(opt, s);
  const double lambda = s.penalty_lambda;

  const int n_vars = VariableLayout(N, J).size() + (phase_one ? 1 : 0);
  ConvexSubproblem sub{solver::ConvexProblem(n_vars), VariableLayout(N, J), {}};
  const VariableLayout& L = sub.layout;
  auto& p = sub.problem;
  const int slack = phase_one ? L.size() : -1;

  // Nudged association used by the warm start (and pinned in phase one).
  constexpr double alpha_floor = 1e-9;
  MatrixXd alpha_start = exp.alpha;
  for (int n = 0; n < N; ++n)
    if ((alpha_start.row(n).array() <= 0.0).any())
      alpha_start.row(n) = (1.0 - J * alpha_floor) * alpha_start.row(n).array() + alpha_floor;

  // Boundary conditions and dynamics.
  for (int d = 0; d < 2; ++d) {
    p.add_equality({{L.q(0, d), 1.0}}, s.q_start(d));
    p.add_equality({{L.v(0, d), 1.0}}, s.v0(d));
    p.add_equality({{L.q(N, d), 1.0}}, s.q_final(d));
  }
  for (int n = 1; n <= N; ++n)
    for (int d = 0; d < 2; ++d) {
      p.add_equality({{L.q(n, d), 1.0}, {L.q(n - 1, d), -1.0}, {L.v(n - 1, d), -T}, {L.a(n - 1, d), -0.5 * T * T}},
                     0.0);
      p.add_equality({{L.v(n, d), 1.0}, {L.v(n - 1, d), -1.0}, {L.a(n - 1, d), -T}}, 0.0);
    }
  // Association and linearized squared distances.
  for (int n = 1; n <= N; ++n) {
    if (phase_one) {
      for (int j = 0; j < J; ++j) p.add_equality({{L.alpha(n, j), 1.0}}, alpha_start(n - 1, j));
      continue;
    }
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < J; ++j) row.push_back({L.alpha(n, j), 1.0});
    p.add_equality(row, 1.0);
  }
  for (int n = 1; n <= N; ++n)
    for (int j = 0; j < J; ++j) {
      const Vec2 d = exp.Q[n] - s.radio.positions[j];
      // ρ − 2dᵀQ = ‖d‖² + H² − 2dᵀQ'
      p.add_equality({{L.rho(n, j), 1.0}, {L.q(n, 0), -2.0 * d.x()}, {L.q(n, 1), -2.0 * d.y()}},
                     d.squaredNorm() + H * H - 2.0 * d.dot(exp.Q[n]));
    }

  // Objective: slot power plus the linearized binary penalty.
  for (int n = 0; n < N; ++n) {
    p.objective_terms.push_back(
        {"power[" + std::to_string(n) + "]",
         {L.v(n, 0), L.v(n, 1), L.a(n, 0), L.a(n, 1), L.theta(n)},
         [c = s.power, w = phase_one ? phase_one->power_weight : 1.0](const VectorXd& z) {
           const auto d = model::power_gradient_hessian(z.head<2>(), z.segment<2>(2), z(4), c);
           return solver::LocalEval{w * d.value, w * d.gradient, w * d.hessian};
         }});
  }
  if (phase_one) {
    p.linear_cost(slack) = phase_one->weight;
    p.lower.push_back({slack, -phase_one->slack_floor});
  } else {
    for (int n = 1; n <= N; ++n)
      for (int j = 0; j < J; ++j) {
        const double ap = exp.alpha(n - 1, j);
        p.linear_cost(L.alpha(n, j)) += lambda * (1.0 - 2.0 * ap);
        p.constant_cost += lambda * ap * ap;
      }
  }

  // Bounds. α ≤ 1 follows from α ≥ 0 and Σα = 1, so only the lower bound is
  // handed to the barrier.
  for (int n = 1; n <= N; ++n)
    for (int j = 0; j < J; ++j) {
      if (!phase_one) p.lower.push_back({L.alpha(n, j), 0.0});
      p.lower.push_back({L.rho(n, j), rho_min});
    }
  for (int n = 0; n < N; ++n) p.lower.push_back({L.theta(n), theta_min});

  // Speed and acceleration limits (v[0] is pinned by an equality).
  // In phase one the caps read ‖z‖² − cap² − s·cap² ≤ 0.
  const double vmax2 = s.v_max * s.v_max, amax2 = s.a_max * s.a_max;
  auto norm_cap = [relaxed = phase_one != nullptr](double cap2) {
    return [cap2, relaxed](const VectorXd& z) {
      const Eigen::Index k = relaxed ? 3 : 2;
      solver::LocalEval e{z.head<2>().squaredNorm() - cap2, VectorXd::Zero(k), MatrixXd::Zero(k, k)};
      e.gradient.head<2>() = 2.0 * z.head<2>();
      e.hessian.topLeftCorner<2, 2>() = 2.0 * Eigen::Matrix2d::Identity();
      if (relaxed) {
        e.value -= z(2) * cap2;
        e.gradient(2) = -cap2;
      }
      return e;
    };
  };
  auto with_slack = [slack](std::vector<int> vars) {
    if (slack >= 0) vars.push_back(slack);
    return vars;
  };
  for (int n = 1; n <= N; ++n)
    p.inequalities.push_back(
        {"speed[" + std::to_string(n) + "]", with_slack({L.v(n, 0), L.v(n, 1)}), norm_cap(vmax2)});
  for (int n = 0; n < N; ++n)
    p.inequalities.push_back(
        {"accel[" + std::to_string(n) + "]", with_slack({L.a(n, 0), L.a(n, 1)}), norm_cap(amax2)});

  for (int n = 0; n < N; ++n) {
    const Vec2 vp = exp.v[n];
    p.inequalities.push_back({"theta_speed[" + std::to_string(n) + "]",
                              {L.v(n, 0), L.v(n, 1), L.theta(n)},
                              [vp](const VectorXd& z) { return theta_speed_constraint(z.head<2>(), z(2), vp); }});
  }

  for (int n = 1; n <= N; ++n)
    for (int j = 0; j < J; ++j) {
      std::vector<int> vars{L.alpha(n, j)};
      for (int k = 0; k < J; ++k) vars.push_back(L.rho(n, k));
      vars.push_back(L.q(n, 0));
      vars.push_back(L.q(n, 1));
      // Scaling the split by c² = ρ' keeps the curvature in ρ relative to its
      // size; unscaled, a non-serving station with a tiny f_j pins q in place.
      const double ap = exp.alpha(n - 1, j), rp = exp.rho(n - 1, j);
      const std::string label = "sinr[" + std::to_string(n) + "," + std::to_string(j) + "]";
      auto base = [j, J, ap, rp, H, u = s.radio.positions[j], gamma = s.gamma_min,
                   snr = s.radio.snr](const VectorXd& z) {
        return sinr_surrogate_constraint_exact(z(0), z.segment(1, J), z.segment<2>(J + 1), u, H, j, ap, rp, gamma,
                                               snr, rp);
      };
      if (!phase_one) {
        p.inequalities.push_back({label, vars, base});
        continue;
      }
      // Normalized by f_j at the expansion point: c − s·f_j(ρ') ≤ 0.
      const VectorXd rho_prev = exp.rho.row(n - 1).transpose();
      const double scale = model::f_j({rho_prev.data(), static_cast<std::size_t>(J)}, j, s.radio.snr);
      vars.push_back(slack);
      p.inequalities.push_back({label, vars, [base, scale, J](const VectorXd& z) {
                                  const solver::LocalEval c = base(z.head(J + 3));
                                  solver::LocalEval e{c.value - z(J + 3) * scale, VectorXd::Zero(J + 4),
                                                      MatrixXd::Zero(J + 4, J + 4)};
                                  e.gradient.head(J + 3) = c.gradient;
                                  e.gradient(J + 3) = -scale;
                                  e.hessian.topLeftCorner(J + 3, J + 3) = c.hessian;
                                  return e;
                                }});
    }

  if (opt.trust_radius) {
    const double r = *opt.trust_radius / s.length_scale;
    for (int n = 1; n < N; ++n) {
      const Vec2 qp = exp.Q[n];
      p.inequalities.push_back({"trust[" + std::to_string(n) + "]",
                                {L.q(n, 0), L.q(n, 1)},
                                [qp, r2 = r * r](const VectorXd& z) {
                                  return solver::LocalEval{(z - qp).squaredNorm() - r2, 2.0 * (z - qp),
                                                           2.0 * MatrixXd::Identity(2, 2)};
                                }});
    }
  }

  // Warm start: the expansion point itself, with ρ taken from the link (it
  // must already agree) and α / θ moved off their bounds if needed.
  TrajectoryIterate w = exp;
  w.alpha = alpha_start;
  for (int n = 1; n <= N; ++n)
    for (int j = 0; j < J; ++j) {
      const double linked = model::squared_distance(exp.Q[n], s.radio.positions[j], H);
      if (std::abs(linked - exp.rho(n - 1, j)) > 1e-8 * std::max(1.0, linked))
        throw AssemblyError("expansion point violates the squared-distance link at slot " + std::to_string(n) +
                            ", station " + std::to_string(j + 1));
      w.rho(n - 1, j) = linked;
    }
  for (int n = 0; n < N; ++n) {
    const double speed = w.v[n].norm();
    if (w.theta(n) >= speed) w.theta(n) = speed * (1.0 - 1e-9);
  }
  sub.warm_start = VectorXd::Zero(n_vars);
  sub.warm_start.head(L.size()) = L.pack(w);
  if (phase_one) {
    // Smallest slack making every relaxed constraint strictly satisfied.
    sub.warm_start(slack) = -phase_one->slack_floor;
    const VectorXd c0 = solver::inequality_values(p, sub.warm_start);
    const Eigen::Index nb = static_cast<Eigen::Index>(p.lower.size() + p.upper.size());
    double need = -phase_one->slack_floor;
    for (Eigen::Index i = nb; i < c0.size(); ++i) {
      const auto& g = p.inequalities[i - nb];
      if (g.vars.back() != slack) continue;
      const VectorXd z = solver::gather(sub.warm_start, g.vars);
      const double coef = -g.eval(z).gradient(z.size() - 1);  // constraint is c(x) − coef·s
      need = std::max(need, (c0(i) + coef * sub.warm_start(slack)) / coef);
    }
    sub.warm_start(slack) = need + 0.01;
  }

  const VectorXd eq = p.A * sub.warm_start - p.b;
  if (eq.lpNorm<Eigen::Infinity>() > 1e-6) {
    Eigen::Index row;
    eq.cwiseAbs().maxCoeff(&row);
    throw AssemblyError("expansion point violates linear equality row " + std::to_string(row) + " by " + std::to_string(eq(row)) +
                        " (dynamics, endpoints or association)");
  }
  const VectorXd c = solver::inequality_values(p, sub.warm_start);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c(i) < 0.0) continue;
    const Eigen::Index nb = static_cast<Eigen::Index>(p.lower.size() + p.upper.size());
    const std::string name = i < nb ? "variable bound" : p.inequalities[i - nb].label;
    throw AssemblyError("expansion point is not strictly feasible for constraint " + name);
  }
  return sub;
}

}  // namespace detail

inline ConvexSubproblem assemble(const ExpansionPoint& exp, const ScaledScenario& s,
                                 const SurrogateOptions& opt = {}) {
  return detail::build_subproblem(exp, s, opt, nullptr);
}

/// Phase-one subproblem; the slack is the last variable (index
/// layout.size()) and the warm start sets it just above the largest
/// normalized violation.
inline ConvexSubproblem assemble_phase_one(const ExpansionPoint& exp, const ScaledScenario& s,
                                           const SurrogateOptions& opt = {}, const PhaseOneOptions& p1 = {}) {
  return detail::build_subproblem(exp, s, opt, &p1);
}

/// Variables in the subproblem: 2(N+1) + 2(N+1) + 2N + NJ + N + NJ.
inline int variable_count(int N, int J) { return VariableLayout(N, J).size(); }

}  // namespace skyplan
