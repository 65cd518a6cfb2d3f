#pragma once

// Connectivity feasibility: does a trajectory exist that is served above
// gamma_min at every slot instant t_1..t_N, moving at most v_max·T_c between
// instants? Two independent deciders are provided (a coverage-disk chain and
// a brute-force grid search over true SINR), plus the construction of a
// kinematically consistent starting iterate for the optimizer.

#include "skyplan/model.hpp"
#include "skyplan/scenario.hpp"
#include "skyplan/surrogate.hpp"
#include "skyplan/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace skyplan::feasibility {

/// Serving station per slot n = 1..N (0-based station indices).
struct AssociationVector {
  std::vector<int> serving;
};

enum class Method { circle_graph, grid_oracle };

inline const char* to_string(Method m) { return m == Method::circle_graph ? "circle-graph" : "grid-oracle"; }

struct FeasibilityCertificate {
  bool feasible = false;
  std::optional<AssociationVector> association;
  /// Positions at t_0..t_N (meters); waypoints[0] = start, waypoints[N] = goal.
  std::optional<std::vector<Vec2>> waypoints;
  Method method = Method::circle_graph;
  double interference_bound = 0.0;
  /// Smallest true SINR of the association at waypoints 1..N.
  std::optional<double> min_true_sinr;
  std::string note;
};

class InitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double reach_per_slot(const Scenario& s) { return s.vehicle.v_max * s.timing.slot; }

/// Constant-speed point on the start→goal chord at slot n.
inline Vec2 chord_point(const Scenario& s, int n) {
  const double f = static_cast<double>(n) / s.timing.n_slots;
  return s.q_start + f * (s.q_final - s.q_start);
}

inline double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + u * ab)).norm();
}

inline Vec2 closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + u * ab;
}

inline Vec2 project_to_disk(const Vec2& p, const Vec2& center, double radius) {
  const Vec2 d = p - center;
  const double n = d.norm();
  if (n <= radius) return p;
  return center + d * (radius / n);
}

inline void fill_min_sinr(FeasibilityCertificate& c, const Scenario& s) {
  if (!c.feasible || !c.association || !c.waypoints || c.association->serving.empty()) return;
  const RadioLayout radio = radio_layout(s);
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= s.timing.n_slots; ++n)
    worst = std::min(worst, model::sinr((*c.waypoints)[n], c.association->serving[n - 1], radio).sinr);
  c.min_true_sinr = worst;
}

inline FeasibilityCertificate straight_line(const Scenario& s, Method method) {
  FeasibilityCertificate c;
  c.method = method;
  const int N = s.timing.n_slots;
  if ((s.q_final - s.q_start).norm() > N * reach_per_slot(s) * (1.0 + 1e-12)) {
    c.note = "goal farther than N·v_max·T_c from the start";
    return c;
  }
  c.feasible = true;
  std::vector<Vec2> w;
  for (int n = 0; n <= N; ++n) w.push_back(chord_point(s, n));
  c.waypoints = w;
  AssociationVector k;
  if (!s.stations.empty()) {
    const RadioLayout radio = radio_layout(s);
    for (int n = 1; n <= N; ++n) k.serving.push_back(model::best_station(w[n], radio).serving);
  }
  c.association = k;
  fill_min_sinr(c, s);
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Coverage-disk chain

/// Cyclic projections onto the disks and the per-slot reach constraints.
/// Endpoints are fixed. Returns true when every constraint holds to 1e-9
/// relative.
inline bool realize_waypoints(std::vector<Vec2>& w, const std::vector<Vec2>& centers,
                              const std::vector<double>& radii, double reach) {
  const int N = static_cast<int>(w.size()) - 1;
  const double tol = 1e-9 * std::max(1.0, reach);
  auto violation = [&] {
    double worst = 0.0;
    for (int n = 1; n <= N; ++n) {
      worst = std::max(worst, (w[n] - w[n - 1]).norm() - reach);
      if (n < N) worst = std::max(worst, (w[n] - centers[n]).norm() - radii[n]);
    }
    return worst;
  };
  for (int sweep = 0; sweep < 20000; ++sweep) {
    if (violation() <= tol) return true;
    for (int n = 1; n < N; ++n) w[n] = detail::project_to_disk(w[n], centers[n], radii[n]);
    for (int n = 1; n <= N; ++n) {
      const Vec2 d = w[n] - w[n - 1];
      const double len = d.norm();
      if (len <= reach) continue;
      const Vec2 excess = d * ((len - reach) / len);
      const bool fix_prev = (n - 1 == 0), fix_next = (n == N);
      if (fix_prev && fix_next) return false;
      if (fix_prev)
        w[n] -= excess;
      else if (fix_next)
        w[n - 1] += excess;
      else {
        w[n] -= 0.5 * excess;
        w[n - 1] += 0.5 * excess;
      }
    }
  }
  return violation() <= tol;
}

/// Layered search over (slot, station) nodes. A station serves when it has
/// a coverage radius r_j at the given interference bound; consecutive
/// serving stations must satisfy ‖Q_{k_n} − Q_{k_{n−1}}‖ ≤ r_{k_n} + d₀ +
/// r_{k_{n−1}}, the first must satisfy ‖Q_{k_1} − Q⁰‖ ≤ r_{k_1} + d₀, and
/// since the goal is occupied at t_N it must lie inside the last disk.
inline FeasibilityCertificate circle_graph_check(const Scenario& s, double interference_bound = 0.0) {
  if (s.gamma_min <= 0.0) return detail::straight_line(s, Method::circle_graph);

  FeasibilityCertificate cert;
  cert.method = Method::circle_graph;
  cert.interference_bound = interference_bound;
  const int N = s.timing.n_slots;
  const int J = s.station_count();
  const double d0 = detail::reach_per_slot(s);

  std::vector<std::optional<double>> radius(J);
  for (int j = 0; j < J; ++j)
    radius[j] = model::coverage_radius(s.stations[j].reference_snr(), s.gamma_min, interference_bound,
                                       s.vehicle.altitude);
  auto pos = [&](int j) { return s.stations[j].position; };

  // cost[n][j]: distance from the chord point of slot n to disk j, summed
  // along the best chain reaching (n, j); infinity when unreachable.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(N + 1, std::vector<double>(J, inf));
  std::vector<std::vector<int>> parent(N + 1, std::vector<int>(J, -1));
  auto disk_gap = [&](int n, int j) {
    return std::max(0.0, (pos(j) - detail::chord_point(s, n)).norm() - *radius[j]);
  };
  for (int j = 0; j < J; ++j)
    if (radius[j] && (pos(j) - s.q_start).norm() <= *radius[j] + d0) cost[1][j] = disk_gap(1, j);
  for (int n = 2; n <= N; ++n)
    for (int j = 0; j < J; ++j) {
      if (!radius[j]) continue;
      for (int i = 0; i < J; ++i) {
        if (cost[n - 1][i] == inf) continue;
        if ((pos(j) - pos(i)).norm() > *radius[j] + d0 + *radius[i]) continue;
        const double c = cost[n - 1][i] + disk_gap(n, j);
        if (c < cost[n][j]) {
          cost[n][j] = c;
          parent[n][j] = i;
        }
      }
    }

  // Candidate final stations in order of chain cost (lowest index on ties).
  std::vector<int> finals;
  for (int j = 0; j < J; ++j)
    if (cost[N][j] < inf && (pos(j) - s.q_final).norm() <= *radius[j]) finals.push_back(j);
  std::stable_sort(finals.begin(), finals.end(), [&](int a, int b) { return cost[N][a] < cost[N][b]; });
  if (finals.empty()) {
    cert.note = "no station chain satisfies the coverage-disk inequalities";
    return cert;
  }

  for (int last : finals) {
    std::vector<int> chain(N);
    chain[N - 1] = last;
    for (int n = N; n > 1; --n) chain[n - 2] = parent[n][chain[n - 1]];

    std::vector<Vec2> centers(N + 1, Vec2::Zero());
    std::vector<double> radii(N + 1, 0.0);
    std::vector<Vec2> w(N + 1);
    w[0] = s.q_start;
    w[N] = s.q_final;
    for (int n = 1; n < N; ++n) {
      const int j = chain[n - 1];
      centers[n] = pos(j);
      radii[n] = *radius[j];
      // Point of the disk closest to the start→goal segment.
      const Vec2 foot = detail::closest_on_segment(pos(j), s.q_start, s.q_final);
      w[n] = detail::project_to_disk(foot, pos(j), *radius[j]);
    }
    if (!realize_waypoints(w, centers, radii, d0)) continue;
    cert.feasible = true;
    cert.association = AssociationVector{chain};
    cert.waypoints = w;
    detail::fill_min_sinr(cert, s);
    return cert;
  }
  cert.note = "chain inequalities hold but no waypoint sequence realizes them within v_max·T_c";
  return cert;
}

// ---------------------------------------------------------------------------
// Grid oracle

struct GridOptions {
  double grid_step = 5.0;
  std::size_t cell_budget = 4'000'000;
  /// Covered means best SINR ≥ gamma_min·(1 + sinr_margin).
  double sinr_margin = 0.0;
  /// Per-slot reach is reach_scale·v_max·T_c + reach_offset.
  double reach_scale = 1.0;
  double reach_offset = 0.0;
  /// Morphological adjustment of the covered set in cells: +1 dilates, −1 erodes.
  int coverage_adjust = 0;
  /// Also keep slot n within the distance reachable from the start when
  /// accelerating from v⁰ at a_max up to v_max.
  bool kinematic_start = false;
};

/// Covered grid cells with their best station.
struct CoverageGrid {
  Vec2 origin = Vec2::Zero();
  double step = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<int> serving;  // −1 when not covered
  std::vector<double> interference;
  double max_interference = 0.0;

  Vec2 point(int idx) const { return origin + step * Vec2(idx % nx, idx / nx); }
  int size() const { return nx * ny; }
};

inline CoverageGrid coverage_grid(const Scenario& s, const GridOptions& opt) {
  if (!(opt.grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
  const int N = s.timing.n_slots;
  const double reach = opt.reach_scale * detail::reach_per_slot(s) + opt.reach_offset;
  const double span = (s.q_final - s.q_start).norm();
  const double pad = std::max(0.0, 0.5 * (N * reach - span)) + opt.grid_step;
  const Vec2 lo = s.q_start.cwiseMin(s.q_final) - Vec2::Constant(pad);
  const Vec2 hi = s.q_start.cwiseMax(s.q_final) + Vec2::Constant(pad);

  CoverageGrid g;
  g.origin = lo;
  g.step = opt.grid_step;
  g.nx = static_cast<int>(std::floor((hi.x() - lo.x()) / opt.grid_step)) + 1;
  g.ny = static_cast<int>(std::floor((hi.y() - lo.y()) / opt.grid_step)) + 1;
  if (static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny) > opt.cell_budget)
    throw GridBudgetError("grid of " + std::to_string(g.nx) + "x" + std::to_string(g.ny) +
                          " cells exceeds the configured budget");
  g.serving.assign(g.size(), -1);
  g.interference.assign(g.size(), 0.0);
  const RadioLayout radio = radio_layout(s);
  const double threshold = s.gamma_min * (1.0 + opt.sinr_margin);
  for (int idx = 0; idx < g.size(); ++idx) {
    if (radio.size() == 0) {
      if (s.gamma_min <= 0.0) g.serving[idx] = 0;
      continue;
    }
    const auto best = model::best_station(g.point(idx), radio);
    if (best.sinr >= threshold) {
      g.serving[idx] = best.serving;
      g.interference[idx] = best.interference;
      g.max_interference = std::max(g.max_interference, best.interference);
    }
  }

  for (int pass = 0; pass < std::abs(opt.coverage_adjust); ++pass) {
    const bool dilate = opt.coverage_adjust > 0;
    std::vector<int> next = g.serving;
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const int idx = iy * g.nx + ix;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int jx = ix + dx, jy = iy + dy;
            const bool inside = jx >= 0 && jy >= 0 && jx < g.nx && jy < g.ny;
            const int nb = inside ? g.serving[jy * g.nx + jx] : -1;
            if (dilate && next[idx] < 0 && nb >= 0) next[idx] = nb;
            if (!dilate && nb < 0) next[idx] = -1;
          }
      }
    g.serving = std::move(next);
  }
  return g;
}

namespace detail {

/// Offsets (dx, dy) within `reach` of the origin, in cells.
inline std::vector<std::pair<int, int>> reach_offsets(double reach, double step) {
  std::vector<std::pair<int, int>> out;
  const int r = static_cast<int>(std::floor(reach / step));
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (std::hypot(dx, dy) * step <= reach * (1.0 + 1e-12)) out.push_back({dx, dy});
  return out;
}

struct LayerSearch {
  // Per layer n = 1..N−1: best cost and parent cell (−2 means the start).
  std::vector<std::vector<double>> cost;
  std::vector<std::vector<int>> parent;
  int final_parent = -1;
  bool goal_covered = false;
  int goal_serving = -1;
};

/// Minimum Σ‖w_n − chord_n‖² over covered cells with reach-limited moves.
/// Distance reachable from the start after n slots, accelerating from ‖v⁰‖
/// at a_max until v_max.
inline double start_reach(const Scenario& s, int n) {
  const double Tc = s.timing.slot;
  double speed = std::min(s.vehicle.v0.norm(), s.vehicle.v_max), dist = 0.0;
  for (int m = 1; m <= n; ++m) {
    const double next = std::min(s.vehicle.v_max, speed + s.vehicle.a_max * Tc);
    dist += 0.5 * (speed + next) * Tc;
    speed = next;
  }
  return dist;
}

inline LayerSearch layered_search(const Scenario& s, const CoverageGrid& g, double reach,
                                  bool kinematic_start = false) {
  const int N = s.timing.n_slots;
  const double inf = std::numeric_limits<double>::infinity();
  LayerSearch out;
  out.cost.assign(N, std::vector<double>(g.size(), inf));
  out.parent.assign(N, std::vector<int>(g.size(), -1));

  const RadioLayout radio = radio_layout(s);
  if (s.gamma_min <= 0.0) {
    out.goal_covered = true;
    out.goal_serving = radio.size() ? model::best_station(s.q_final, radio).serving : -1;
  } else if (radio.size() > 0) {
    const auto best = model::best_station(s.q_final, radio);
    out.goal_covered = best.sinr >= s.gamma_min;
    out.goal_serving = best.serving;
  }

  auto slack_ok = [&](const Vec2& p, int n) {
    // Prune cells that cannot reach the goal in the remaining slots.
    if (kinematic_start && (p - s.q_start).norm() > start_reach(s, n)) return false;
    return (p - s.q_final).norm() <= (N - n) * reach * (1.0 + 1e-12) + g.step;
  };
  if (N == 1) {
    if ((s.q_final - s.q_start).norm() <= reach * (1.0 + 1e-12)) out.final_parent = -2;
    return out;
  }
  for (int idx = 0; idx < g.size(); ++idx) {
    if (g.serving[idx] < 0) continue;
    const Vec2 p = g.point(idx);
    if ((p - s.q_start).norm() <= reach * (1.0 + 1e-12) && slack_ok(p, 1)) {
      out.cost[1][idx] = (p - chord_point(s, 1)).squaredNorm();
      out.parent[1][idx] = -2;
    }
  }
  const auto offsets = reach_offsets(reach, g.step);
  for (int n = 2; n < N; ++n) {
    const Vec2 target = chord_point(s, n);
    for (int idx = 0; idx < g.size(); ++idx) {
      const double base = out.cost[n - 1][idx];
      if (base == inf) continue;
      const int ix = idx % g.nx, iy = idx / g.nx;
      for (const auto& [dx, dy] : offsets) {
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny) continue;
        const int jdx = jy * g.nx + jx;
        if (g.serving[jdx] < 0) continue;
        const Vec2 p = g.point(jdx);
        const double c = base + (p - target).squaredNorm();
        if (c < out.cost[n][jdx] && slack_ok(p, n)) {
          out.cost[n][jdx] = c;
          out.parent[n][jdx] = idx;
        }
      }
    }
  }
  double best = inf;
  for (int idx = 0; idx < g.size(); ++idx) {
    const double c = out.cost[N - 1][idx];
    if (c < best && (g.point(idx) - s.q_final).norm() <= reach * (1.0 + 1e-12)) {
      best = c;
      out.final_parent = idx;
    }
  }
  return out;
}

}  // namespace detail

/// Brute-force decision over a grid of candidate positions using the true
/// SINR with full interference. Exact up to grid resolution.
inline FeasibilityCertificate grid_oracle_check(const Scenario& s, const GridOptions& opt = {}) {
  FeasibilityCertificate cert;
  cert.method = Method::grid_oracle;
  if (s.gamma_min <= 0.0) {
    cert = detail::straight_line(s, Method::grid_oracle);
    return cert;
  }
  if (s.stations.empty()) {
    cert.note = "no ground stations";
    return cert;
  }
  const CoverageGrid g = coverage_grid(s, opt);
  cert.interference_bound = g.max_interference;
  const double reach = opt.reach_scale * detail::reach_per_slot(s) + opt.reach_offset;
  const auto search = detail::layered_search(s, g, reach, opt.kinematic_start);
  const int N = s.timing.n_slots;
  if (!search.goal_covered) {
    cert.note = "goal is not covered at gamma_min";
    return cert;
  }
  if (search.final_parent == -1) {
    cert.note = "no reach-limited path through covered cells";
    return cert;
  }
  std::vector<Vec2> w(N + 1);
  AssociationVector k;
  k.serving.assign(N, -1);
  w[0] = s.q_start;
  w[N] = s.q_final;
  k.serving[N - 1] = search.goal_serving;
  int idx = search.final_parent;
  for (int n = N - 1; n >= 1; --n) {
    w[n] = g.point(idx);
    k.serving[n - 1] = g.serving[idx];
    idx = search.parent[n][idx];
  }
  cert.feasible = true;
  cert.waypoints = w;
  cert.association = k;
  detail::fill_min_sinr(cert, s);
  return cert;
}

/// Oracle verdict together with its robustness to one grid cell of
/// erosion/dilation of the covered set and of the reach radius.
struct OracleVerdict {
  FeasibilityCertificate nominal;
  bool pessimistic_feasible = false;
  bool optimistic_feasible = false;

  bool has_margin() const { return pessimistic_feasible == optimistic_feasible; }
};

inline OracleVerdict grid_oracle_with_margin(const Scenario& s, const GridOptions& opt = {}) {
  OracleVerdict v;
  v.nominal = grid_oracle_check(s, opt);
  GridOptions pess = opt, opti = opt;
  pess.coverage_adjust = -1;
  pess.reach_offset = opt.reach_offset - opt.grid_step;
  opti.coverage_adjust = +1;
  opti.reach_offset = opt.reach_offset + opt.grid_step;
  v.pessimistic_feasible = grid_oracle_check(s, pess).feasible;
  v.optimistic_feasible = grid_oracle_check(s, opti).feasible;
  return v;
}

// ---------------------------------------------------------------------------
// Initial iterate

struct InitOptions {
  double theta_min = 0.1;  // m/s
  /// Relative SINR margin demanded of the seed at every slot instant.
  double sinr_margin = 0.02;
  double grid_step = 5.0;
  int max_retries = 60;
};

namespace detail {

struct Kinematics {
  std::vector<Vec2> Q, v, a;
};

/// Accelerations minimizing Σ‖a‖² + Σ_{n=1}^{N−1} μ_n ‖Q[n] − w_n‖² subject to
/// the exact double-integrator recursion from (Q⁰, v⁰) and Q[N] = Q^F.
inline Kinematics fit_kinematics(const std::vector<Vec2>& w, const Vec2& v0, double T, const VectorXd& mu) {
  const int N = static_cast<int>(w.size()) - 1;
  // Q[n] = Q0 + nTv0 + Σ_{m<n} T²(n − m − ½) a[m]
  MatrixXd M = MatrixXd::Zero(N + 1, N);
  for (int n = 1; n <= N; ++n)
    for (int m = 0; m < n; ++m) M(n, m) = T * T * (n - m - 0.5);
  Kinematics k;
  k.a.assign(N, Vec2::Zero());
  for (int d = 0; d < 2; ++d) {
    VectorXd base(N + 1);
    for (int n = 0; n <= N; ++n) base(n) = w[0](d) + n * T * v0(d);
    // KKT of min ‖a‖² + μ‖M_in a − y‖²  s.t.  M_N a = w_N − base_N
    MatrixXd K = MatrixXd::Zero(N + 1, N + 1);
    VectorXd rhs = VectorXd::Zero(N + 1);
    K.topLeftCorner(N, N) = MatrixXd::Identity(N, N);
    for (int n = 1; n < N; ++n) {
      K.topLeftCorner(N, N) += mu(n) * M.row(n).transpose() * M.row(n);
      rhs.head(N) += mu(n) * M.row(n).transpose() * (w[n](d) - base(n));
    }
    K.block(0, N, N, 1) = M.row(N).transpose();
    K.block(N, 0, 1, N) = M.row(N);
    rhs(N) = w[N](d) - base(N);
    const VectorXd sol = K.fullPivLu().solve(rhs);
    for (int m = 0; m < N; ++m) k.a[m](d) = sol(m);
  }
  k.Q.assign(N + 1, Vec2::Zero());
  k.v.assign(N + 1, Vec2::Zero());
  k.Q[0] = w[0];
  k.v[0] = v0;
  for (int n = 1; n <= N; ++n) {
    k.Q[n] = k.Q[n - 1] + k.v[n - 1] * T + 0.5 * k.a[n - 1] * T * T;
    k.v[n] = k.v[n - 1] + k.a[n - 1] * T;
  }
  k.Q[N] = w[N];  // equal up to rounding; pin exactly
  return k;
}

}  // namespace detail

struct SeedFit {
  TrajectoryIterate iterate;
  /// True when SINR, speed, acceleration and θ_min all hold strictly.
  bool admissible = false;
  std::string failure;
};

/// Starting iterate (scaled units): the waypoints are tracked by a
/// least-squares double-integrator fit whose per-slot waypoint weights are
/// raised where the serving SINR fails. Returns the best effort even when it
/// is not strictly feasible.
inline SeedFit fit_seed(const FeasibilityCertificate& cert, const Scenario& s, const InitOptions& opt = {}) {
  if (!cert.feasible || !cert.waypoints || !cert.association)
    throw InitializationError("initial_trajectory requires a feasible certificate");
  const int N = s.timing.n_slots;
  const int J = s.station_count();
  const double T = s.timing.slot;
  const auto& w = *cert.waypoints;
  const auto& k = cert.association->serving;
  if (static_cast<int>(w.size()) != N + 1 || static_cast<int>(k.size()) != N)
    throw InitializationError("certificate does not match the slot count");
  if (s.vehicle.v0.norm() <= opt.theta_min)
    throw InitializationError("initial speed |v0| must exceed theta_min");
  const RadioLayout radio = radio_layout(s);

  // Waypoint weights μ_n (1/s⁴) start small so the fit is smooth, and grow
  // only at the slots whose serving SINR is not yet met.
  std::string failure = "no attempt";
  std::optional<detail::Kinematics> found;
  detail::Kinematics kin;
  VectorXd mu = VectorXd::Constant(N + 1, 1e-4);
  for (int attempt = 0; attempt <= opt.max_retries && !found; ++attempt) {
    kin = detail::fit_kinematics(w, s.vehicle.v0, T, mu);
    bool sinr_ok = true;
    for (int n = 1; n < N; ++n)
      if (s.gamma_min > 0.0 && model::sinr(kin.Q[n], k[n - 1], radio).sinr <= s.gamma_min * (1.0 + 1e-9)) {
        sinr_ok = false;
        failure = "serving SINR below gamma_min at slot " + std::to_string(n);
        mu(n) *= 8.0;
      }
    if (!sinr_ok) continue;
    failure.clear();
    for (int n = 1; n <= N && failure.empty(); ++n)
      if (kin.v[n].norm() >= s.vehicle.v_max) failure = "speed limit exceeded at slot " + std::to_string(n);
    for (int n = 0; n < N && failure.empty(); ++n) {
      if (kin.a[n].norm() >= s.vehicle.a_max) failure = "acceleration limit exceeded at slot " + std::to_string(n);
      else if (kin.v[n].norm() <= opt.theta_min * (1.0 + 1e-6))
        failure = "speed below theta_min at slot " + std::to_string(n);
    }
    if (!failure.empty()) break;  // tighter tracking only makes the motion rougher
    found = kin;
  }
  SeedFit out;
  out.admissible = found.has_value();
  out.failure = failure;
  if (found) kin = *found;
  for (int n = 0; n < N; ++n)
    if (kin.v[n].norm() <= opt.theta_min)
      throw InitializationError("seed speed at slot " + std::to_string(n) + " does not exceed theta_min");

  const double L = s.length_scale;
  TrajectoryIterate& it = out.iterate;
  for (int n = 0; n <= N; ++n) {
    it.Q.push_back(kin.Q[n] / L);
    it.v.push_back(kin.v[n] / L);
  }
  for (int n = 0; n < N; ++n) it.a.push_back(kin.a[n] / L);
  it.Q[0] = s.q_start / L;
  it.Q[N] = s.q_final / L;
  it.v[0] = s.vehicle.v0 / L;
  it.alpha = MatrixXd::Zero(N, J);
  it.rho = MatrixXd::Zero(N, J);
  it.theta = VectorXd::Zero(N);
  for (int n = 1; n <= N; ++n) {
    if (J > 0) it.alpha(n - 1, std::max(0, k[n - 1])) = 1.0;
    for (int j = 0; j < J; ++j)
      it.rho(n - 1, j) = model::squared_distance(it.Q[n], s.stations[j].position / L, s.vehicle.altitude / L);
  }
  for (int n = 0; n < N; ++n) it.theta(n) = std::max(it.v[n].norm(), opt.theta_min / L);
  return out;
}

/// Strictly feasible starting iterate or InitializationError.
inline TrajectoryIterate initial_trajectory(const FeasibilityCertificate& cert, const Scenario& s,
                                            const InitOptions& opt = {}) {
  SeedFit f = fit_seed(cert, s, opt);
  if (!f.admissible) throw InitializationError("no kinematically admissible seed: " + f.failure);
  return std::move(f.iterate);
}

/// Seed used by the optimizer: a grid path kept a small SINR margin inside
/// the covered region and a little short of the reach limit, falling back to
/// the plain oracle path. When no variant yields a strictly admissible fit
/// the first feasible certificate is returned.
inline FeasibilityCertificate seed_certificate(const Scenario& s, const InitOptions& opt = {}) {
  GridOptions g;
  g.grid_step = opt.grid_step;
  FeasibilityCertificate last;
  std::optional<FeasibilityCertificate> first_feasible;
  struct Attempt {
    double margin, scale;
    bool kinematic;
  };
  const Attempt attempts[] = {{10 * opt.sinr_margin, 0.8, true}, {opt.sinr_margin, 0.8, true},
                              {opt.sinr_margin, 0.9, true},      {0.0, 1.0, true},
                              {0.0, 1.0, false}};
  for (const auto& a : attempts) {
    g.sinr_margin = a.margin;
    g.reach_scale = a.scale;
    g.kinematic_start = a.kinematic;
    last = grid_oracle_check(s, g);
    if (!last.feasible) continue;
    if (!first_feasible) first_feasible = last;
    try {
      if (fit_seed(last, s, opt).admissible) return last;
    } catch (const InitializationError&) {
    }
  }
  return first_feasible ? *first_feasible : last;
}

}  // namespace skyplan::feasibility
