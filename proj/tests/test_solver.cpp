#include "skyplan/solver.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace skyplan;
using namespace skyplan::solver;

namespace {

SmoothTerm quadratic(std::vector<int> vars, MatrixXd Q, VectorXd c, double c0, std::string label) {
  return {std::move(label), std::move(vars), [Q, c, c0](const VectorXd& z) {
            return LocalEval{0.5 * z.dot(Q * z) + c.dot(z) + c0, Q * z + c, Q};
          }};
}

// ‖z − center‖² − r² ≤ 0
SmoothTerm ball(std::vector<int> vars, VectorXd center, double r) {
  return {"ball", std::move(vars), [center, r](const VectorXd& z) {
            const VectorXd d = z - center;
            return LocalEval{d.squaredNorm() - r * r, 2.0 * d, 2.0 * MatrixXd::Identity(z.size(), z.size())};
          }};
}

}  // namespace

TEST_CASE("equality and bound constrained quadratic matches the closed form") {
  // min (x−3)² + (y+1)²  s.t.  x + y = 1,  x ≤ 1.5.  Along the line the
  // unconstrained minimizer is x = 2.5, so the bound is active: (1.5, −0.5).
  ConvexProblem p(2);
  p.objective_terms.push_back(quadratic({0, 1}, 2.0 * MatrixXd::Identity(2, 2), Eigen::Vector2d(-6, 2), 10, "f"));
  p.add_equality({{0, 1.0}, {1, 1.0}}, 1.0);
  p.upper.push_back({0, 1.5});
  const auto r = solve(p, Eigen::Vector2d(0.0, 1.0));
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(std::abs(r.x_star(0) - 1.5) < 1e-7);
  CHECK(std::abs(r.x_star(1) + 0.5) < 1e-7);
  CHECK(r.kkt.max() <= 1e-8);
  // Multiplier on x ≤ 1.5: stationarity in x is 2(x−3) + ν + λ = 0 and in y is 2(y+1) + ν = 0.
  CHECK(std::abs(r.multipliers.inequality(0) - 4.0) < 1e-6);
  CHECK(std::abs(r.multipliers.equality(0) + 1.0) < 1e-6);
}

TEST_CASE("linear objective over a disk") {
  ConvexProblem p(2);
  p.linear_cost = Eigen::Vector2d(-1.0, -1.0);
  p.inequalities.push_back(ball({0, 1}, Eigen::Vector2d::Zero(), 1.0));
  const auto r = solve(p, Eigen::Vector2d(0.1, -0.2));
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK((r.x_star - Eigen::Vector2d::Constant(std::sqrt(0.5))).norm() < 1e-7);
  CHECK(std::abs(r.objective + std::sqrt(2.0)) < 1e-7);
  CHECK(r.kkt.max() <= 1e-8);
}

TEST_CASE("random box-constrained quadratics agree with projected gradient") {
  // Independent reference: projected gradient descent with a safe step.
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B(i, j) = U(rng);
    const MatrixXd Q = B.transpose() * B + 0.5 * MatrixXd::Identity(n, n);
    VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = 3.0 * U(rng);
    ConvexProblem p(n);
    p.objective_terms.push_back(quadratic([&] {
      std::vector<int> v(n);
      for (int i = 0; i < n; ++i) v[i] = i;
      return v;
    }(), Q, c, 0.0, "q"));
    for (int i = 0; i < n; ++i) {
      p.lower.push_back({i, -1.0});
      p.upper.push_back({i, 1.0});
    }
    const auto r = solve(p, VectorXd::Zero(n));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.kkt.max() <= 1e-8);

    const double step = 1.0 / Q.operatorNorm();
    VectorXd z = VectorXd::Zero(n);
    for (int it = 0; it < 200000; ++it) {
      const VectorXd next = (z - step * (Q * z + c)).cwiseMax(-1.0).cwiseMin(1.0);
      if ((next - z).norm() < 1e-14) break;
      z = next;
    }
    CHECK((r.x_star - z).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("warm start validation") {
  ConvexProblem p(2);
  p.add_equality({{0, 1.0}}, 1.0);
  p.lower.push_back({1, 0.0});
  CHECK_THROWS_AS(solve(p, VectorXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(solve(p, Eigen::Vector2d(0.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(solve(p, Eigen::Vector2d(1.0, 0.0)), std::invalid_argument);
  CHECK_NOTHROW(solve(p, Eigen::Vector2d(1.0 + 1e-8, 1.0)));
}

TEST_CASE("equality drift below the tolerance is removed") {
  ConvexProblem p(2);
  p.objective_terms.push_back(quadratic({0, 1}, MatrixXd::Identity(2, 2), VectorXd::Zero(2), 0.0, "f"));
  p.add_equality({{0, 1.0}, {1, 1.0}}, 2.0);
  const auto r = solve(p, Eigen::Vector2d(1.0 + 5e-7, 1.0));
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK((r.x_star - Eigen::Vector2d(1.0, 1.0)).norm() < 1e-9);
  CHECK(r.kkt.primal_eq <= 1e-8);
}

TEST_CASE("derivative check flags a wrong gradient") {
  ConvexProblem p(2);
  p.objective_terms.push_back(quadratic({0, 1}, 2.0 * MatrixXd::Identity(2, 2), VectorXd::Zero(2), 0.0, "good"));
  p.objective_terms.push_back({"bad", {0}, [](const VectorXd& z) {
                                 MatrixXd H(1, 1);
                                 H << 4.0 * z(0);  // consistent with the wrong gradient
                                 VectorXd g(1);
                                 g << 2.0 * z(0) * z(0);  // true derivative is 3z²
                                 return LocalEval{z(0) * z(0) * z(0), g, H};
                               }});
  const auto rep = derivative_check(p, Eigen::Vector2d(0.7, -0.3));
  CHECK(rep.terms_checked == 2);
  CHECK(rep.max_gradient_error > 0.1);
  CHECK(rep.worst_gradient_term == "bad");
  CHECK(rep.max_hessian_error < 1e-6);
}

TEST_CASE("merit decreases within each barrier stage") {
  ConvexProblem p(3);
  p.linear_cost = Eigen::Vector3d(1.0, -2.0, 0.5);
  p.inequalities.push_back(ball({0, 1, 2}, Eigen::Vector3d(0.2, 0.1, 0.0), 2.0));
  const auto r = solve(p, Eigen::Vector3d::Zero());
  REQUIRE(r.status == SolveStatus::optimal);
  for (const auto& stage : r.merit_history)
    for (std::size_t i = 1; i < stage.size(); ++i) CHECK(stage[i] <= stage[i - 1]);
  CHECK(r.final_barrier_weight >= 2.0 / 1e-8);
}
