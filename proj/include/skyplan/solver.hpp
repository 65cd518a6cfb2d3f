#pragma once

// Primal-dual barrier interior-point method for smooth convex problems
//
//   minimize    f(x) = c0 + cᵀx + Σ_k f_k(x_{S_k})
//   subject to  A x = b
//               lo_i ≤ x_i,  x_i ≤ up_i
//               g_m(x_{S_m}) ≤ 0       (g_m convex, twice differentiable)
//
// Each smooth term touches a small subset S of the variables and reports its
// value, gradient and Hessian in local coordinates. Newton steps solve the
// bordered KKT system with a symmetric indefinite (Bunch-Kaufman)
// factorization; equality drift in the warm start is removed by the step.

#include "skyplan/types.hpp"

#include <Eigen/Core>
#include <Eigen/Dense>
#include <lapacke.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace skyplan::solver {

struct LocalEval {
  double value = 0.0;
  VectorXd gradient;
  MatrixXd hessian;
};

using LocalFunction = std::function<LocalEval(const VectorXd&)>;

struct SmoothTerm {
  std::string label;
  std::vector<int> vars;
  LocalFunction eval;
};

struct Bound {
  int var = 0;
  double value = 0.0;
};

struct ConvexProblem {
  int n = 0;
  MatrixXd A;
  VectorXd b;
  double constant_cost = 0.0;
  VectorXd linear_cost;
  std::vector<SmoothTerm> objective_terms;
  std::vector<Bound> lower;
  std::vector<Bound> upper;
  std::vector<SmoothTerm> inequalities;

  explicit ConvexProblem(int variables = 0)
      : n(variables), A(0, variables), b(0), linear_cost(VectorXd::Zero(variables)) {}

  int equality_count() const { return static_cast<int>(A.rows()); }
  int inequality_count() const {
    return static_cast<int>(lower.size() + upper.size() + inequalities.size());
  }

  /// Appends a row aᵀx = rhs given as sparse (index, coefficient) pairs.
  void add_equality(const std::vector<std::pair<int, double>>& coeffs, double rhs) {
    const Eigen::Index row = A.rows();
    A.conservativeResize(row + 1, n);
    A.row(row).setZero();
    for (const auto& [i, c] : coeffs) A(row, i) += c;
    b.conservativeResize(row + 1);
    b(row) = rhs;
  }
};

struct SolverConfig {
  double barrier_mu_factor = 10.0;
  double initial_barrier_weight = 1.0;
  double kkt_tolerance = 1e-8;
  int max_newton_per_stage = 50;
  double armijo_sigma = 0.01;
  double backtrack_beta = 0.5;
  double fraction_to_boundary = 0.995;
};

enum class SolveStatus { optimal, max_iterations, numerical_failure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

struct KktResiduals {
  double stationarity = 0.0;
  double primal_eq = 0.0;
  double primal_ineq = 0.0;
  double complementarity = 0.0;

  double max() const { return std::max({stationarity, primal_eq, primal_ineq, complementarity}); }
};

/// Multipliers ordered as: equalities ν; then inequalities λ in the order
/// lower bounds, upper bounds, smooth inequalities.
struct Multipliers {
  VectorXd equality;
  VectorXd inequality;
};

struct SolverResult {
  VectorXd x_star;
  double objective = 0.0;
  SolveStatus status = SolveStatus::numerical_failure;
  KktResiduals kkt;
  Multipliers multipliers;
  int newton_iterations_total = 0;
  int barrier_stages = 0;
  double final_barrier_weight = 0.0;
  std::string diagnostic;
  /// Merit value after every accepted Newton step, one list per stage.
  std::vector<std::vector<double>> merit_history;
};

// ---------------------------------------------------------------------------
// Evaluation helpers

inline VectorXd gather(const VectorXd& x, const std::vector<int>& vars) {
  VectorXd local(static_cast<Eigen::Index>(vars.size()));
  for (std::size_t i = 0; i < vars.size(); ++i) local(i) = x(vars[i]);
  return local;
}

struct FullEval {
  double value = 0.0;
  VectorXd gradient;
  MatrixXd hessian;
};

inline double objective_value(const ConvexProblem& p, const VectorXd& x) {
  double v = p.constant_cost + p.linear_cost.dot(x);
  for (const auto& term : p.objective_terms) v += term.eval(gather(x, term.vars)).value;
  return v;
}

inline FullEval objective_full(const ConvexProblem& p, const VectorXd& x) {
  FullEval e;
  e.value = p.constant_cost + p.linear_cost.dot(x);
  e.gradient = p.linear_cost;
  e.hessian = MatrixXd::Zero(p.n, p.n);
  for (const auto& term : p.objective_terms) {
    const LocalEval le = term.eval(gather(x, term.vars));
    e.value += le.value;
    for (std::size_t i = 0; i < term.vars.size(); ++i) {
      e.gradient(term.vars[i]) += le.gradient(i);
      for (std::size_t k = 0; k < term.vars.size(); ++k) e.hessian(term.vars[i], term.vars[k]) += le.hessian(i, k);
    }
  }
  return e;
}

/// All inequality values in multiplier order (bounds written as c(x) ≤ 0).
inline VectorXd inequality_values(const ConvexProblem& p, const VectorXd& x) {
  VectorXd c(p.inequality_count());
  Eigen::Index r = 0;
  for (const auto& lb : p.lower) c(r++) = lb.value - x(lb.var);
  for (const auto& ub : p.upper) c(r++) = x(ub.var) - ub.value;
  for (const auto& g : p.inequalities) c(r++) = g.eval(gather(x, g.vars)).value;
  return c;
}

/// Jacobian of the inequalities (dense, m × n).
inline MatrixXd inequality_jacobian(const ConvexProblem& p, const VectorXd& x) {
  MatrixXd J = MatrixXd::Zero(p.inequality_count(), p.n);
  Eigen::Index r = 0;
  for (const auto& lb : p.lower) J(r++, lb.var) = -1.0;
  for (const auto& ub : p.upper) J(r++, ub.var) = 1.0;
  for (const auto& g : p.inequalities) {
    const LocalEval le = g.eval(gather(x, g.vars));
    for (std::size_t i = 0; i < g.vars.size(); ++i) J(r, g.vars[i]) += le.gradient(i);
    ++r;
  }
  return J;
}

/// Log barrier φ(x) = −Σ log(−c_i(x)); +∞ outside the strict interior.
inline FullEval barrier_full(const ConvexProblem& p, const VectorXd& x) {
  FullEval e;
  e.gradient = VectorXd::Zero(p.n);
  e.hessian = MatrixXd::Zero(p.n, p.n);
  auto infeasible = [&] {
    e.value = std::numeric_limits<double>::infinity();
    return e;
  };
  for (const auto& lb : p.lower) {
    const double s = x(lb.var) - lb.value;
    if (!(s > 0.0)) return infeasible();
    e.value -= std::log(s);
    e.gradient(lb.var) -= 1.0 / s;
    e.hessian(lb.var, lb.var) += 1.0 / (s * s);
  }
  for (const auto& ub : p.upper) {
    const double s = ub.value - x(ub.var);
    if (!(s > 0.0)) return infeasible();
    e.value -= std::log(s);
    e.gradient(ub.var) += 1.0 / s;
    e.hessian(ub.var, ub.var) += 1.0 / (s * s);
  }
  for (const auto& g : p.inequalities) {
    const LocalEval le = g.eval(gather(x, g.vars));
    const double s = -le.value;
    if (!(s > 0.0)) return infeasible();
    e.value -= std::log(s);
    // ∇φ = ∇g / s ;  ∇²φ = ∇g∇gᵀ / s² + ∇²g / s
    for (std::size_t i = 0; i < g.vars.size(); ++i) {
      e.gradient(g.vars[i]) += le.gradient(i) / s;
      for (std::size_t k = 0; k < g.vars.size(); ++k)
        e.hessian(g.vars[i], g.vars[k]) += le.gradient(i) * le.gradient(k) / (s * s) + le.hessian(i, k) / s;
    }
  }
  return e;
}

inline double barrier_value(const ConvexProblem& p, const VectorXd& x) {
  double v = 0.0;
  for (const auto& lb : p.lower) {
    const double s = x(lb.var) - lb.value;
    if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
    v -= std::log(s);
  }
  for (const auto& ub : p.upper) {
    const double s = ub.value - x(ub.var);
    if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
    v -= std::log(s);
  }
  for (const auto& g : p.inequalities) {
    const double s = -g.eval(gather(x, g.vars)).value;
    if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
    v -= std::log(s);
  }
  return v;
}

// ---------------------------------------------------------------------------
// KKT residuals

inline KktResiduals kkt_residuals(const ConvexProblem& p, const VectorXd& x, const Multipliers& mult) {
  KktResiduals r;
  const FullEval f = objective_full(p, x);
  VectorXd stat = f.gradient;
  if (p.equality_count() > 0) {
    stat += p.A.transpose() * mult.equality;
    r.primal_eq = (p.A * x - p.b).lpNorm<Eigen::Infinity>();
  }
  if (p.inequality_count() > 0) {
    const VectorXd c = inequality_values(p, x);
    stat += inequality_jacobian(p, x).transpose() * mult.inequality;
    r.primal_ineq = std::max(0.0, c.maxCoeff());
    r.complementarity = mult.inequality.cwiseProduct(c).cwiseAbs().maxCoeff();
  }
  r.stationarity = stat.lpNorm<Eigen::Infinity>();
  return r;
}

/// Barrier duals λ_i = 1/(−t c_i) and least-squares equality multipliers.
inline Multipliers barrier_multipliers(const ConvexProblem& p, const VectorXd& x, double t) {
  Multipliers m;
  VectorXd grad = objective_full(p, x).gradient;
  if (p.inequality_count() > 0) {
    const VectorXd c = inequality_values(p, x);
    m.inequality = (-t * c.array()).inverse().matrix();
    grad += inequality_jacobian(p, x).transpose() * m.inequality;
  } else {
    m.inequality.resize(0);
  }
  if (p.equality_count() > 0) {
    // min ‖grad + Aᵀν‖ ; Aᵀ has full column rank after assembly.
    m.equality = p.A.transpose().colPivHouseholderQr().solve(-grad);
  } else {
    m.equality.resize(0);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Linear algebra

/// Solves the symmetric indefinite system K z = rhs in place. Returns false
/// if the factorization reports a singular pivot or produces non-finite data.
inline bool symmetric_indefinite_solve(MatrixXd K, VectorXd& rhs) {
  const lapack_int dim = static_cast<lapack_int>(K.rows());
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(dim));
  lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', dim, K.data(), dim, ipiv.data());
  if (info != 0) return false;
  info = LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', dim, 1, K.data(), dim, ipiv.data(), rhs.data(), dim);
  return info == 0 && rhs.allFinite();
}

struct NewtonStep {
  VectorXd dx;
  VectorXd w;
  double regularization = 0.0;
  bool ok = false;
};

/// [H Aᵀ; A −δI][dx; w] = [−g; −r], with δ (and +δ on H) only after a
/// factorization failure.
inline NewtonStep newton_step(const MatrixXd& H, const VectorXd& g, const MatrixXd& A, const VectorXd& r) {
  const Eigen::Index n = H.rows(), p = A.rows();
  MatrixXd K(n + p, n + p);
  K.topLeftCorner(n, n) = H;
  K.bottomLeftCorner(p, n) = A;
  K.topRightCorner(n, p) = A.transpose();
  K.bottomRightCorner(p, p).setZero();
  VectorXd rhs(n + p);
  rhs.head(n) = -g;
  rhs.tail(p) = -r;

  NewtonStep step;
  double delta = 0.0;
  while (true) {
    MatrixXd Kd = K;
    if (delta > 0.0) {
      Kd.diagonal().head(n).array() += delta;
      Kd.diagonal().tail(p).array() -= delta;
    }
    VectorXd sol = rhs;
    if (symmetric_indefinite_solve(std::move(Kd), sol)) {
      step.dx = sol.head(n);
      step.w = sol.tail(p);
      step.regularization = delta;
      step.ok = true;
      return step;
    }
    delta = (delta == 0.0) ? 1e-10 : 2.0 * delta;
    if (delta > 1e-2) return step;
  }
}

// ---------------------------------------------------------------------------
// Solve

namespace detail {

/// Largest step in (0, 1] keeping every bound strictly interior by the
/// fraction-to-boundary rule.
inline double bound_step_limit(const ConvexProblem& p, const VectorXd& x, const VectorXd& dx, double tau) {
  double s = 1.0;
  for (const auto& lb : p.lower)
    if (dx(lb.var) < 0.0) s = std::min(s, tau * (x(lb.var) - lb.value) / -dx(lb.var));
  for (const auto& ub : p.upper)
    if (dx(ub.var) > 0.0) s = std::min(s, tau * (ub.value - x(ub.var)) / dx(ub.var));
  return s;
}

/// Inequality values, Jacobian and the multiplier-weighted Hessian Σ λ_i ∇²c_i.
struct ConstraintEval {
  VectorXd c;
  MatrixXd jacobian;
  MatrixXd weighted_hessian;
};

inline ConstraintEval evaluate_constraints(const ConvexProblem& p, const VectorXd& x, const VectorXd& lambda) {
  ConstraintEval e;
  const int m = p.inequality_count();
  e.c.resize(m);
  e.jacobian = MatrixXd::Zero(m, p.n);
  e.weighted_hessian = MatrixXd::Zero(p.n, p.n);
  Eigen::Index r = 0;
  for (const auto& lb : p.lower) {
    e.c(r) = lb.value - x(lb.var);
    e.jacobian(r++, lb.var) = -1.0;
  }
  for (const auto& ub : p.upper) {
    e.c(r) = x(ub.var) - ub.value;
    e.jacobian(r++, ub.var) = 1.0;
  }
  for (const auto& g : p.inequalities) {
    const LocalEval le = g.eval(gather(x, g.vars));
    e.c(r) = le.value;
    for (std::size_t i = 0; i < g.vars.size(); ++i) {
      e.jacobian(r, g.vars[i]) += le.gradient(i);
      for (std::size_t k = 0; k < g.vars.size(); ++k)
        e.weighted_hessian(g.vars[i], g.vars[k]) += lambda(r) * le.hessian(i, k);
    }
    ++r;
  }
  return e;
}

/// Residuals of the perturbed KKT system at barrier weight t:
/// dual ∇f + Jᵀλ + Aᵀν, centrality −λ∘c − 1/t, primal Ax − b.
struct PdResidual {
  VectorXd dual;
  VectorXd cent;
  VectorXd pri;

  double norm() const { return std::sqrt(dual.squaredNorm() + cent.squaredNorm() + pri.squaredNorm()); }
};

inline PdResidual pd_residual(const ConvexProblem& p, const VectorXd& grad_f, const ConstraintEval& ce,
                              const VectorXd& x, const VectorXd& lambda, const VectorXd& nu, double t) {
  PdResidual r;
  r.dual = grad_f;
  if (lambda.size() > 0) r.dual += ce.jacobian.transpose() * lambda;
  if (nu.size() > 0) r.dual += p.A.transpose() * nu;
  r.cent = (-lambda.array() * ce.c.array() - 1.0 / t).matrix();
  r.pri = p.equality_count() > 0 ? VectorXd(p.A * x - p.b) : VectorXd(0);
  return r;
}

inline double inf_norm(const VectorXd& v) { return v.size() > 0 ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace detail

/// Primal-dual barrier path following. The weight t grows by
/// barrier_mu_factor per stage; each stage runs Newton steps on the
/// perturbed KKT residual with backtracking on its norm until the stage is
/// centered. The last stage is the first with 1/t ≤ kkt_tolerance / 2, so
/// the complementarity λ_i(−c_i) ≈ 1/t lands inside the tolerance.
inline SolverResult solve(const ConvexProblem& p, const VectorXd& warm_start, const SolverConfig& cfg = {}) {
  if (warm_start.size() != p.n) throw std::invalid_argument("warm start has wrong dimension");
  SolverResult res;
  VectorXd x = warm_start;

  if (p.equality_count() > 0 && (p.A * x - p.b).lpNorm<Eigen::Infinity>() > 1e-6)
    throw std::invalid_argument("warm start violates the linear equalities by more than 1e-6");
  if (!std::isfinite(barrier_value(p, x)))
    throw std::invalid_argument("warm start is not strictly interior to the inequalities");

  const int m = p.inequality_count();
  const double tol = cfg.kkt_tolerance;
  double t = cfg.initial_barrier_weight;
  Multipliers start = barrier_multipliers(p, x, t);
  VectorXd lambda = start.inequality;
  VectorXd nu = start.equality;

  auto finish = [&](SolveStatus status, std::string diag) {
    res.x_star = x;
    res.objective = objective_value(p, x);
    res.multipliers.inequality = lambda;
    res.multipliers.equality = nu;
    res.kkt = kkt_residuals(p, x, res.multipliers);
    res.final_barrier_weight = t;
    if (status == SolveStatus::optimal && res.kkt.max() > tol) {
      status = SolveStatus::numerical_failure;
      diag = "final KKT residuals above tolerance (stationarity " + std::to_string(res.kkt.stationarity) +
             ", primal_eq " + std::to_string(res.kkt.primal_eq) + ", complementarity " +
             std::to_string(res.kkt.complementarity) + ")";
    }
    res.status = status;
    res.diagnostic = std::move(diag);
    return res;
  };

  bool final_stage = (m == 0) || (1.0 / t <= 0.5 * tol);
  while (true) {
    ++res.barrier_stages;
    res.merit_history.emplace_back();
    auto& merits = res.merit_history.back();
    bool centered = false;
    std::string stall;
    const double dual_target = final_stage ? 0.5 * tol : std::max(0.5 * tol, 1.0 / t);

    for (int it = 0; it <= cfg.max_newton_per_stage; ++it) {
      const FullEval f = objective_full(p, x);
      const detail::ConstraintEval ce = detail::evaluate_constraints(p, x, lambda);
      const detail::PdResidual r = detail::pd_residual(p, f.gradient, ce, x, lambda, nu, t);
      const double r_norm = r.norm();
      if (merits.empty()) merits.push_back(r_norm);
      spdlog::trace("  t={:.3g} it={} dual={:.3e} cent={:.3e} pri={:.3e} obj={:.12g}", t, it,
                    detail::inf_norm(r.dual), detail::inf_norm(r.cent), detail::inf_norm(r.pri), f.value);

      if (detail::inf_norm(r.dual) <= dual_target && detail::inf_norm(r.pri) <= 0.5 * tol &&
          detail::inf_norm(r.cent) <= 0.5 / t) {
        centered = true;
        break;
      }
      if (it == cfg.max_newton_per_stage) break;

      // Reduced Newton system after eliminating dλ:
      //   [H + Jᵀ diag(λ/−c) J   Aᵀ] [dx]   = −[∇f + Jᵀ(1/(−t c)) + Aᵀν]
      //   [A                     0 ] [dν]      [Ax − b]
      const VectorXd slack = -ce.c;
      MatrixXd H = f.hessian + ce.weighted_hessian;
      VectorXd g = f.gradient;
      if (nu.size() > 0) g += p.A.transpose() * nu;
      if (m > 0) {
        const VectorXd w = lambda.cwiseQuotient(slack);
        H.noalias() += ce.jacobian.transpose() * w.asDiagonal() * ce.jacobian;
        g += ce.jacobian.transpose() * (slack.cwiseInverse() / t);
      }
      const NewtonStep step = newton_step(H, g, p.A, r.pri);
      ++res.newton_iterations_total;
      if (!step.ok) {
        stall = "KKT factorization failed after regularization up to 1e-2";
        break;
      }
      VectorXd dlambda(m);
      if (m > 0)
        dlambda = (lambda.cwiseQuotient(slack).asDiagonal() * (ce.jacobian * step.dx)) - lambda +
                  slack.cwiseInverse() / t;

      double s = detail::bound_step_limit(p, x, step.dx, cfg.fraction_to_boundary);
      for (int i = 0; i < m; ++i)
        if (dlambda(i) < 0.0) s = std::min(s, cfg.fraction_to_boundary * lambda(i) / -dlambda(i));

      bool accepted = false;
      while (s > 1e-14) {
        const VectorXd x_t = x + s * step.dx;
        const VectorXd l_t = lambda + s * dlambda;
        const VectorXd n_t = nu + s * step.w;
        if (m == 0 || inequality_values(p, x_t).maxCoeff() < 0.0) {
          const detail::ConstraintEval ce_t = detail::evaluate_constraints(p, x_t, l_t);
          const VectorXd grad_t = objective_full(p, x_t).gradient;
          const double merit = detail::pd_residual(p, grad_t, ce_t, x_t, l_t, n_t, t).norm();
          if (merit <= (1.0 - cfg.armijo_sigma * s) * r_norm) {
            x = x_t;
            lambda = l_t;
            nu = n_t;
            merits.push_back(merit);
            accepted = true;
            break;
          }
        }
        s *= cfg.backtrack_beta;
      }
      if (!accepted) {
        stall = "line search failed to reduce the KKT residual (dual " + std::to_string(detail::inf_norm(r.dual)) +
                ", centrality " + std::to_string(detail::inf_norm(r.cent)) + ", primal " +
                std::to_string(detail::inf_norm(r.pri)) + ")";
        break;
      }
    }
    spdlog::trace("barrier stage t={:.3g} done: centered={} newton={} {}", t, centered,
                  res.newton_iterations_total, stall);

    if (final_stage) {
      if (centered) return finish(SolveStatus::optimal, "");
      if (!stall.empty()) return finish(SolveStatus::numerical_failure, stall);
      return finish(SolveStatus::max_iterations, "Newton iteration limit in final stage");
    }
    t *= cfg.barrier_mu_factor;
    final_stage = 1.0 / t <= 0.5 * tol;
  }
}

// ---------------------------------------------------------------------------
// Derivative check

struct DerivativeReport {
  double max_gradient_error = 0.0;
  double max_hessian_error = 0.0;
  std::string worst_gradient_term;
  std::string worst_hessian_term;
  int terms_checked = 0;

  double max_error() const { return std::max(max_gradient_error, max_hessian_error); }
};

/// Central finite differences of one local function at `local_x`. Errors are
/// relative to the ∞-norm of the finite-difference block.
inline std::pair<double, double> check_local(const LocalFunction& fn, const VectorXd& local_x, double step) {
  const LocalEval at = fn(local_x);
  const Eigen::Index k = local_x.size();
  VectorXd fd_grad(k);
  MatrixXd fd_hess(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double h = step * std::max(1.0, std::abs(local_x(i)));
    VectorXd xp = local_x, xm = local_x;
    xp(i) += h;
    xm(i) -= h;
    const LocalEval ep = fn(xp), em = fn(xm);
    fd_grad(i) = (ep.value - em.value) / (2.0 * h);
    fd_hess.col(i) = (ep.gradient - em.gradient) / (2.0 * h);
  }
  auto rel = [](const auto& analytic, const auto& fd) {
    const double scale = std::max({fd.template lpNorm<Eigen::Infinity>(),
                                   analytic.template lpNorm<Eigen::Infinity>(), 1e-300});
    return (analytic - fd).template lpNorm<Eigen::Infinity>() / scale;
  };
  return {rel(at.gradient, fd_grad), rel(at.hessian, fd_hess)};
}

inline DerivativeReport derivative_check(const ConvexProblem& p, const VectorXd& x, double step = 1e-5) {
  DerivativeReport rep;
  auto visit = [&](const SmoothTerm& term) {
    const auto [ge, he] = check_local(term.eval, gather(x, term.vars), step);
    ++rep.terms_checked;
    if (ge > rep.max_gradient_error) {
      rep.max_gradient_error = ge;
      rep.worst_gradient_term = term.label;
    }
    if (he > rep.max_hessian_error) {
      rep.max_hessian_error = he;
      rep.worst_hessian_term = term.label;
    }
  };
  for (const auto& t : p.objective_terms) visit(t);
  for (const auto& g : p.inequalities) visit(g);
  return rep;
}

}  // namespace skyplan::solver
