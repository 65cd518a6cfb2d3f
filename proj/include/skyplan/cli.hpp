#pragma once

// Command implementations behind the skyplan executable. Each command takes
// its inputs explicitly and writes to caller-supplied streams so tests can
// drive it without a process boundary.

#include "skyplan/feasibility.hpp"
#include "skyplan/model.hpp"
#include "skyplan/scenario.hpp"
#include "skyplan/sca.hpp"
#include "skyplan/solver.hpp"
#include "skyplan/surrogate.hpp"

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace skyplan::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int connectivity_violated = 2;
inline constexpr int infeasible = 3;
inline constexpr int solver_failure = 4;
inline constexpr int usage = 64;
}  // namespace exit_code

struct RunFlags {
  std::optional<double> gamma_min;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<int> max_iterations;
  std::optional<double> trust_region;
};

// ---------------------------------------------------------------------------
// Formatting

/// Fixed 12-significant-digit rendering; never shortest round-trip.
inline std::string fmt_num(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

/// FNV-1a 64 over the canonical scenario serialization.
inline std::string scenario_fingerprint(const Scenario& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize_scenario(s)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

inline std::string trace_json(const sca::TrajectoryTrace& tr, const std::string& fingerprint, int iterations) {
  std::ostringstream o;
  o << "{\n  \"scenario_fingerprint\": " << json_string(fingerprint) << ",\n  \"slots\": [";
  for (std::size_t i = 0; i < tr.slots.size(); ++i) {
    const auto& r = tr.slots[i];
    o << (i ? ",\n" : "\n") << "    {\"n\": " << r.n << ", \"t_s\": " << fmt_num(r.t) << ", \"x_m\": " << fmt_num(r.position.x())
      << ", \"y_m\": " << fmt_num(r.position.y()) << ", \"vx\": " << fmt_num(r.velocity.x())
      << ", \"vy\": " << fmt_num(r.velocity.y()) << ", \"ax\": " << fmt_num(r.acceleration.x())
      << ", \"ay\": " << fmt_num(r.acceleration.y()) << ", \"serving_gbs\": " << r.serving_gbs
      << ", \"sinr\": " << fmt_num(r.sinr) << ", \"power_W\": " << fmt_num(r.power_W) << "}";
  }
  const auto& v = tr.validation;
  o << "\n  ],\n  \"totals\": {\"power_W_sum\": " << fmt_num(tr.power_W_sum) << ", \"energy_J\": " << fmt_num(tr.energy_J)
    << "},\n  \"validation\": {\"min_serving_sinr\": " << fmt_num(v.min_serving_sinr)
    << ", \"endpoint_error_m\": " << fmt_num(v.endpoint_error_m)
    << ", \"connectivity_violated\": " << (v.connectivity_violated ? "true" : "false")
    << ", \"speed_margin\": " << fmt_num(v.speed_margin) << ", \"accel_margin\": " << fmt_num(v.accel_margin)
    << "},\n  \"iterations\": " << iterations << "\n}\n";
  return o.str();
}

inline std::string trace_csv(const sca::TrajectoryTrace& tr) {
  std::ostringstream o;
  o << "n,t_s,x_m,y_m,vx,vy,ax,ay,serving_gbs,sinr,power_W\n";
  for (const auto& r : tr.slots)
    o << r.n << ',' << fmt_num(r.t) << ',' << fmt_num(r.position.x()) << ',' << fmt_num(r.position.y()) << ','
      << fmt_num(r.velocity.x()) << ',' << fmt_num(r.velocity.y()) << ',' << fmt_num(r.acceleration.x()) << ','
      << fmt_num(r.acceleration.y()) << ',' << r.serving_gbs << ',' << fmt_num(r.sinr) << ',' << fmt_num(r.power_W)
      << '\n';
  return o.str();
}

inline std::string convergence_csv(const std::vector<sca::SolveReport>& reports) {
  std::ostringstream o;
  o << "iteration,surrogate_obj,exact_obj,penalty_residual,max_binary_gap,wall_time\n";
  for (const auto& r : reports)
    o << r.iteration << ',' << fmt_num(r.surrogate_objective) << ',' << fmt_num(r.exact_objective) << ','
      << fmt_num(r.penalty_residual) << ',' << fmt_num(r.max_binary_gap) << ',' << fmt_num(r.wall_seconds) << '\n';
  return o.str();
}

inline std::string certificate_json(const feasibility::FeasibilityCertificate& c, const Scenario& s) {
  std::ostringstream o;
  o << "{\"method\": " << json_string(feasibility::to_string(c.method))
    << ", \"feasible\": " << (c.feasible ? "true" : "false") << ", \"association\": ";
  if (c.association) {
    o << '[';
    for (std::size_t i = 0; i < c.association->serving.size(); ++i) {
      const int k = c.association->serving[i];
      o << (i ? ", " : "") << (k >= 0 && k < s.station_count() ? s.stations[k].id : 0);
    }
    o << ']';
  } else {
    o << "null";
  }
  o << ", \"waypoints\": ";
  if (c.waypoints) {
    o << '[';
    for (std::size_t i = 0; i < c.waypoints->size(); ++i)
      o << (i ? ", " : "") << '[' << fmt_num((*c.waypoints)[i].x()) << ", " << fmt_num((*c.waypoints)[i].y()) << ']';
    o << ']';
  } else {
    o << "null";
  }
  o << ", \"interference_bound\": " << fmt_num(c.interference_bound) << ", \"note\": " << json_string(c.note) << '}';
  return o.str();
}

/// Write to a sibling temporary file, then rename over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Commands

inline void apply_flags(const RunFlags& f, Scenario& s, sca::ScaConfig& cfg) {
  if (f.gamma_min) s.gamma_min = *f.gamma_min;
  if (f.lambda) s.penalty_lambda = *f.lambda;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.max_iterations) cfg.max_iterations = *f.max_iterations;
  if (f.trust_region) cfg.surrogate.trust_radius = *f.trust_region;
  validate(s);
}

/// Scenario from a bundled layout name ("map1", "map2") or a JSON file.
inline Scenario resolve_scenario(const std::string& path, const std::string& seed_layout) {
  if (!seed_layout.empty()) {
    if (seed_layout == "map1") return map1_scenario();
    if (seed_layout == "map2") return map2_scenario();
    throw std::invalid_argument("unknown seed layout '" + seed_layout + "' (expected map1 or map2)");
  }
  if (path.empty()) throw std::invalid_argument("a scenario file or --seed-layout is required");
  return load_scenario(path);
}

struct PlanOutcome {
  int code = exit_code::ok;
  std::optional<sca::ScaResult> result;
  std::string trace_json;
};

/// Plan one trajectory. When `out_dir` is non-empty, trace.json, trace.csv
/// and convergence.csv are written there.
inline PlanOutcome plan(Scenario s, const RunFlags& flags, const std::string& out_dir, std::ostream& out,
                        std::ostream& err) {
  PlanOutcome po;
  sca::ScaConfig cfg;
  apply_flags(flags, s, cfg);
  const std::string fp = scenario_fingerprint(s);
  const std::filesystem::path dir(out_dir);
  try {
    sca::ScaResult r = sca::run(s, cfg);
    po.trace_json = trace_json(r.trace, fp, static_cast<int>(r.reports.size()));
    if (!out_dir.empty()) {
      atomic_write(dir / "trace.json", po.trace_json);
      atomic_write(dir / "trace.csv", trace_csv(r.trace));
      atomic_write(dir / "convergence.csv", convergence_csv(r.reports));
    }
    const auto& v = r.trace.validation;
    const bool kinematics_ok = v.speed_margin >= -1e-6 && v.accel_margin >= -1e-6;
    if (v.connectivity_violated)
      po.code = exit_code::connectivity_violated;
    else if (!r.converged || !kinematics_ok)
      po.code = exit_code::solver_failure;
    out << "{\"status\": "
        << json_string(po.code == exit_code::ok ? "ok"
                       : po.code == exit_code::connectivity_violated ? "connectivity_violated"
                                                                     : (r.converged ? "invalid_trace" : "not_converged"))
        << ", \"exit_code\": " << po.code << ", \"iterations\": " << r.reports.size()
        << ", \"power_W_sum\": " << fmt_num(r.trace.power_W_sum) << ", \"energy_J\": " << fmt_num(r.trace.energy_J)
        << ", \"min_serving_sinr\": " << fmt_num(v.min_serving_sinr)
        << ", \"connectivity_violated\": " << (v.connectivity_violated ? "true" : "false")
        << ", \"max_binary_gap\": " << fmt_num(v.max_binary_gap) << "}\n";
    if (po.code != exit_code::ok) err << "plan finished with exit code " << po.code << '\n';
    po.result = std::move(r);
  } catch (const sca::InfeasibleScenario& e) {
    po.code = exit_code::infeasible;
    err << e.what() << '\n';
    out << "{\"status\": \"infeasible\", \"exit_code\": 3, \"certificate\": " << certificate_json(e.certificate, s) << "}\n";
  } catch (const sca::SolverFailure& e) {
    po.code = exit_code::solver_failure;
    err << e.what() << '\n';
    if (!out_dir.empty()) atomic_write(dir / "convergence.csv", convergence_csv(e.reports));
    out << "{\"status\": \"solver_failure\", \"exit_code\": 4, \"message\": " << json_string(e.what()) << "}\n";
  }
  return po;
}

inline int cmd_plan(const Scenario& s, const RunFlags& flags, const std::string& out_dir, std::ostream& out,
                    std::ostream& err) {
  return plan(s, flags, out_dir, out, err).code;
}

/// Print the circle-graph certificate; with `oracle` also the grid verdict,
/// the circle-graph rerun at the oracle's interference bound, and whether
/// the two agree.
inline int cmd_check(Scenario s, const RunFlags& flags, bool oracle, std::ostream& out, std::ostream& err) {
  sca::ScaConfig unused;
  apply_flags(flags, s, unused);
  if (!oracle) {
    const auto cert = feasibility::circle_graph_check(s, 0.0);
    out << certificate_json(cert, s) << '\n';
    if (!cert.feasible) err << "infeasible: " << cert.note << '\n';
    return cert.feasible ? exit_code::ok : exit_code::infeasible;
  }
  feasibility::FeasibilityCertificate grid;
  try {
    grid = feasibility::grid_oracle_check(s);
  } catch (const feasibility::GridBudgetError& e) {
    err << e.what() << '\n';
    return exit_code::failure;
  }
  const auto circle = feasibility::circle_graph_check(s, grid.interference_bound);
  const bool agree = circle.feasible == grid.feasible;
  out << "{\"circle_graph\": " << certificate_json(circle, s) << ", \"grid_oracle\": " << certificate_json(grid, s)
      << ", \"agreement\": " << (agree ? "true" : "false") << "}\n";
  if (!circle.feasible) err << "infeasible: " << circle.note << '\n';
  return circle.feasible ? exit_code::ok : exit_code::infeasible;
}

/// γ sweep. Writes sweep.csv under `out_dir` when given.
inline int cmd_sweep(Scenario s, const RunFlags& flags, const std::vector<double>& gammas, const std::string& out_dir,
                     std::ostream& out, std::ostream& err) {
  if (gammas.empty()) {
    err << "sweep needs a non-empty --gammas list\n";
    return exit_code::usage;
  }
  sca::ScaConfig cfg;
  apply_flags(flags, s, cfg);
  const auto rows = sca::gamma_sweep(s, gammas, cfg);
  std::ostringstream csv;
  csv << "gamma,total_power_W,energy_J,converged,feasible,iterations\n";
  bool any = false, any_feasible = false;
  for (const auto& r : rows) {
    csv << fmt_num(r.gamma_min) << ',' << fmt_num(r.power_W_sum) << ',' << fmt_num(r.energy_J) << ','
        << (r.converged ? 1 : 0) << ',' << (r.feasible ? 1 : 0) << ',' << r.iterations << '\n';
    if (r.trace) any = true;
    any_feasible = any_feasible || r.feasible;
    if (!r.error.empty()) err << "gamma " << fmt_num(r.gamma_min) << ": " << r.error << '\n';
  }
  if (!out_dir.empty()) atomic_write(std::filesystem::path(out_dir) / "sweep.csv", csv.str());
  out << csv.str();
  if (any) return exit_code::ok;
  return any_feasible ? exit_code::solver_failure : exit_code::infeasible;
}

// ---------------------------------------------------------------------------
// Self-test probes

struct ProbeResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct SelftestOptions {
  /// Probe groups to run: "derivatives", "concavity", "surrogate". Empty runs all.
  std::vector<std::string> groups;
  std::uint32_t seed = 7;
  int draws = 100;
  /// Extra local function whose derivatives are checked under the name
  /// "derivatives/injected"; lets tests plant a defective callback.
  std::optional<solver::LocalFunction> injected;
  VectorXd injected_point;
};

namespace detail {

inline ProbeResult fd_probe(const std::string& name, int draws, std::mt19937& rng,
                            const std::function<std::pair<solver::LocalFunction, VectorXd>(std::mt19937&)>& sample) {
  ProbeResult r{name, true, 0.0, 1e-5, {}};
  for (int i = 0; i < draws; ++i) {
    const auto [fn, x] = sample(rng);
    const auto [ge, he] = solver::check_local(fn, x, 1e-5);
    r.worst = std::max({r.worst, ge, he});
  }
  r.passed = r.worst <= r.limit;
  return r;
}

inline std::vector<double> uniform_vec(std::mt19937& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

}  // namespace detail

inline std::vector<ProbeResult> run_probes(const SelftestOptions& opt) {
  auto wanted = [&](const char* g) {
    return opt.groups.empty() || std::find(opt.groups.begin(), opt.groups.end(), g) != opt.groups.end();
  };
  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<ProbeResult> out;

  if (wanted("derivatives")) {
    const PowerCoefficients pc{0.002, 80.0, 10.0, 1e-6};
    out.push_back(detail::fd_probe("derivatives/power", opt.draws, rng, [&](std::mt19937& g) {
      VectorXd x(5);
      for (int i = 0; i < 2; ++i) x(i) = 15.0 * (2.0 * U(g) - 1.0);
      for (int i = 2; i < 4; ++i) x(i) = 5.0 * (2.0 * U(g) - 1.0);
      x(4) = 1.0 + 19.0 * U(g);
      solver::LocalFunction fn = [pc](const VectorXd& z) {
        const auto d = model::power_gradient_hessian(z.head<2>(), z.segment<2>(2), z(4), pc);
        return solver::LocalEval{d.value, d.gradient, d.hessian};
      };
      return std::pair{fn, x};
    }));
    out.push_back(detail::fd_probe("derivatives/f_j", opt.draws, rng, [&](std::mt19937& g) {
      const int J = 2 + static_cast<int>(U(g) * 7);
      const int j = static_cast<int>(U(g) * J);
      const auto snr = detail::uniform_vec(g, J, 1.0, 1e4);
      VectorXd x(J - 1);
      for (int i = 0; i < J - 1; ++i) x(i) = 0.3 + 5.0 * U(g);
      solver::LocalFunction fn = [snr, j, J](const VectorXd& z) {
        std::vector<double> rho(J, 1.0);
        for (int k = 0, i = 0; k < J; ++k)
          if (k != j) rho[k] = z(i++);
        const auto d = model::f_j_gradient_hessian(rho, j, snr);
        return solver::LocalEval{d.value, d.gradient, d.hessian};
      };
      return std::pair{fn, x};
    }));
    out.push_back(detail::fd_probe("derivatives/theta_speed", opt.draws, rng, [&](std::mt19937& g) {
      const Vec2 vp(2.0 * U(g) - 1.0, 2.0 * U(g) - 1.0);
      VectorXd x(3);
      x << 2.0 * U(g) - 1.0, 2.0 * U(g) - 1.0, 0.05 + U(g);
      solver::LocalFunction fn = [vp](const VectorXd& z) { return theta_speed_constraint(z.head<2>(), z(2), vp); };
      return std::pair{fn, x};
    }));
    out.push_back(detail::fd_probe("derivatives/sinr_surrogate", opt.draws, rng, [&](std::mt19937& g) {
      const int J = 2 + static_cast<int>(U(g) * 7);
      const int j = static_cast<int>(U(g) * J);
      const auto snr = detail::uniform_vec(g, J, 1.0, 1e4);
      const double ap = U(g), rp = 0.3 + 5.0 * U(g), gamma = 0.5 + 2.0 * U(g);
      VectorXd x(J + 1);
      x(0) = U(g);
      for (int k = 0; k < J; ++k) x(1 + k) = 0.3 + 5.0 * U(g);
      solver::LocalFunction fn = [=](const VectorXd& z) {
        return sinr_surrogate_constraint(z(0), z.tail(J), j, ap, rp, gamma, snr);
      };
      return std::pair{fn, x};
    }));
    out.push_back(detail::fd_probe("derivatives/sinr_surrogate_exact", opt.draws, rng, [&](std::mt19937& g) {
      const int J = 2 + static_cast<int>(U(g) * 7);
      const int j = static_cast<int>(U(g) * J);
      const auto snr = detail::uniform_vec(g, J, 1.0, 1e4);
      const double ap = U(g), rp = 0.3 + 5.0 * U(g), gamma = 0.5 + 2.0 * U(g), H = 0.5;
      const Vec2 u(4.0 * U(g) - 2.0, 4.0 * U(g) - 2.0);
      VectorXd x(J + 3);
      x(0) = U(g);
      for (int k = 0; k < J; ++k) x(1 + k) = 0.3 + 5.0 * U(g);
      x(J + 1) = 4.0 * U(g) - 2.0;
      x(J + 2) = 4.0 * U(g) - 2.0;
      solver::LocalFunction fn = [=](const VectorXd& z) {
        return sinr_surrogate_constraint_exact(z(0), z.segment(1, J), z.segment<2>(J + 1), u, H, j, ap, rp, gamma,
                                               snr, rp);
      };
      return std::pair{fn, x};
    }));
    if (opt.injected) {
      ProbeResult r{"derivatives/injected", true, 0.0, 1e-5, {}};
      const auto [ge, he] = solver::check_local(*opt.injected, opt.injected_point, 1e-5);
      r.worst = std::max(ge, he);
      r.passed = r.worst <= r.limit;
      out.push_back(r);
    }
  }

  if (wanted("concavity")) {
    ProbeResult r{"concavity/f_j", true, 0.0, 1e-8, {}};
    for (int i = 0; i < 10 * opt.draws; ++i) {
      const int J = 2 + i % 7;
      const int j = static_cast<int>(U(rng) * J);
      std::vector<double> snr(J), rho(J);
      for (int k = 0; k < J; ++k) {
        snr[k] = std::pow(10.0, 4.0 * U(rng));
        rho[k] = std::pow(10.0, 3.0 * U(rng) - 1.0);
      }
      const auto d = model::f_j_gradient_hessian(rho, j, snr);
      const Eigen::SelfAdjointEigenSolver<MatrixXd> es(d.hessian, Eigen::EigenvaluesOnly);
      const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
      if (norm == 0.0) continue;
      r.worst = std::max(r.worst, es.eigenvalues().maxCoeff() / norm);
    }
    r.passed = r.worst <= r.limit;
    out.push_back(r);
  }

  if (wanted("surrogate")) {
    ProbeResult tangent{"surrogate/tangency", true, 0.0, 1e-9, {}};
    ProbeResult theta{"surrogate/theta_speed", true, 0.0, 0.0, {}};
    ProbeResult sinr{"surrogate/sinr_soundness", true, 0.0, 0.0, {}};
    ProbeResult bilinear{"surrogate/bilinear_gap", true, 0.0, 1e-9, {}};
    for (int i = 0; i < opt.draws; ++i) {
      // θ-speed: tangent at v = v', and feasibility implies ‖v‖² ≥ θ².
      const Vec2 vp(2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0), v(2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0);
      const double th = U(rng);
      const double at_prev = theta_speed_constraint(vp, th, vp).value;
      tangent.worst = std::max(tangent.worst, std::abs(at_prev - (th * th - vp.squaredNorm())) / std::max(1.0, th * th));
      if (theta_speed_constraint(v, th, vp).value <= 0.0)
        theta.worst = std::max(theta.worst, th * th - v.squaredNorm());

      // Bilinear bound: gap equals the squared displacement.
      const double a = U(rng), rho = 5.0 * U(rng), ap = U(rng), rp = 5.0 * U(rng);
      const double gap = a * a + rho * rho - bilinear_lower_bound(a, rho, ap, rp);
      const double disp = (a - ap) * (a - ap) + (rho - rp) * (rho - rp);
      bilinear.worst = std::max(bilinear.worst, std::abs(gap - disp) / std::max(1.0, disp));

      // SINR surrogate: tangent at the expansion point and sound elsewhere.
      const int J = 2 + static_cast<int>(U(rng) * 7);
      const int j = static_cast<int>(U(rng) * J);
      const auto snr = detail::uniform_vec(rng, J, 1.0, 1e4);
      const double gamma = 0.5 + 2.0 * U(rng);
      VectorXd rv(J);
      for (int k = 0; k < J; ++k) rv(k) = 0.3 + 5.0 * U(rng);
      const double exact = sinr_slack_constraint(a, rv, j, gamma, snr);
      const double sur_at = sinr_surrogate_constraint(a, rv, j, a, rv(j), gamma, snr).value;
      tangent.worst = std::max(tangent.worst, std::abs(sur_at - exact) / std::max(1.0, std::abs(exact)));
      if (sinr_surrogate_constraint(a, rv, j, ap, rp, gamma, snr).value <= 0.0)
        sinr.worst = std::max(sinr.worst, exact);
    }
    for (ProbeResult* p : {&tangent, &theta, &sinr, &bilinear}) {
      p->passed = p->worst <= p->limit;
      out.push_back(*p);
    }
  }
  return out;
}

inline int cmd_selftest(const SelftestOptions& opt, std::ostream& out, std::ostream& err) {
  static const char* known[] = {"derivatives", "concavity", "surrogate"};
  for (const auto& g : opt.groups)
    if (std::find(std::begin(known), std::end(known), g) == std::end(known)) {
      err << "unknown probe group '" << g << "'\n";
      return exit_code::usage;
    }
  const auto results = run_probes(opt);
  bool all = true;
  char line[160];
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-36s %-4s worst %.3e limit %.1e\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                  r.worst, r.limit);
    out << line;
    if (!r.passed) {
      all = false;
      err << "probe failed: " << r.name << '\n';
    }
  }
  return all ? exit_code::ok : exit_code::failure;
}

}  // namespace skyplan::cli
