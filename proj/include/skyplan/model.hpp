#pragma once

// Channel, SINR and propulsion power, with analytic first and second
// derivatives for the pieces the convex subproblem needs.

#include "skyplan/scenario.hpp"
#include "skyplan/types.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>

namespace skyplan::model {

/// Squared 3-D distance between a vehicle at ground position q (altitude H)
/// and a station on the ground.
inline double squared_distance(const Vec2& q, const Vec2& station, double altitude) {
  return (q - station).squaredNorm() + altitude * altitude;
}

struct SinrBreakdown {
  int serving = 0;
  double signal = 0.0;
  double interference = 0.0;
  double sinr = 0.0;
};

/// SINR with noise folded into the reference SNRs: (h_j/d_j²) / (Σ_{k≠j} h_k/d_k² + 1).
inline SinrBreakdown sinr(const Vec2& q, int serving, const RadioLayout& radio) {
  if (serving < 0 || serving >= radio.size()) throw std::out_of_range("serving station index out of range");
  SinrBreakdown out;
  out.serving = serving;
  for (int k = 0; k < radio.size(); ++k) {
    const double rx = radio.snr[k] / squared_distance(q, radio.positions[k], radio.altitude);
    if (k == serving)
      out.signal = rx;
    else
      out.interference += rx;
  }
  out.sinr = out.signal / (out.interference + 1.0);
  return out;
}

/// Station with the largest SINR at q; ties go to the lowest index.
inline SinrBreakdown best_station(const Vec2& q, const RadioLayout& radio) {
  SinrBreakdown best;
  best.serving = -1;
  best.sinr = -1.0;
  for (int j = 0; j < radio.size(); ++j) {
    const auto s = sinr(q, j, radio);
    if (s.sinr > best.sinr) best = s;
  }
  return best;
}

/// Ground-plane radius inside which a station with reference SNR h meets
/// gamma_min given an assumed interference level. Empty when the station
/// cannot reach the threshold even directly overhead.
inline std::optional<double> coverage_radius(double snr, double gamma_min, double interference_bound,
                                             double altitude) {
  if (!(gamma_min > 0.0)) throw std::invalid_argument("coverage_radius requires gamma_min > 0");
  const double radicand = snr / (gamma_min * (interference_bound + 1.0)) - altitude * altitude;
  if (radicand <= 0.0) return std::nullopt;
  return std::sqrt(radicand);
}

// ---------------------------------------------------------------------------
// Propulsion power

struct PowerTerms {
  double kinetic = 0.0;
  double parasitic = 0.0;
  double total = 0.0;
};

/// c1‖v‖³ + (c2/θ)(1 + ‖a‖²/g). Coincides with the fixed-wing power model
/// when θ = ‖v‖.
inline PowerTerms power_slack(const Vec2& v, const Vec2& a, double theta, const PowerCoefficients& c) {
  if (!(theta > 0.0)) throw std::domain_error("power_slack requires theta > 0");
  PowerTerms p;
  const double speed = v.norm();
  p.kinetic = c.c1 * speed * speed * speed;
  p.parasitic = (c.c2 / theta) * (1.0 + a.squaredNorm() / c.gravity);
  p.total = p.kinetic + p.parasitic;
  return p;
}

/// Fixed-wing propulsion power at speed ‖v‖ and acceleration a.
inline double propulsion_power(const Vec2& v, const Vec2& a, const PowerCoefficients& c) {
  return power_slack(v, a, v.norm(), c).total;
}

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Smoothed power and derivatives over (vx, vy, ax, ay, θ). The kinetic term
/// uses (‖v‖² + ε²)^{3/2} so the Hessian exists at v = 0.
struct PowerDerivatives {
  double value = 0.0;
  Vec5 gradient = Vec5::Zero();
  Mat5 hessian = Mat5::Zero();
};

inline PowerDerivatives power_gradient_hessian(const Vec2& v, const Vec2& a, double theta,
                                               const PowerCoefficients& c) {
  if (!(theta > 0.0)) throw std::domain_error("power_gradient_hessian requires theta > 0");
  PowerDerivatives d;
  const double eps2 = c.speed_smoothing * c.speed_smoothing;
  const double r = std::sqrt(v.squaredNorm() + eps2);
  const double drag = 1.0 + a.squaredNorm() / c.gravity;
  d.value = c.c1 * r * r * r + c.c2 / theta * drag;

  d.gradient.head<2>() = 3.0 * c.c1 * r * v;
  d.gradient.segment<2>(2) = (2.0 * c.c2 / (theta * c.gravity)) * a;
  d.gradient(4) = -c.c2 / (theta * theta) * drag;

  d.hessian.topLeftCorner<2, 2>() = 3.0 * c.c1 * (r * Eigen::Matrix2d::Identity() + v * v.transpose() / r);
  d.hessian.block<2, 2>(2, 2) = (2.0 * c.c2 / (theta * c.gravity)) * Eigen::Matrix2d::Identity();
  const Vec2 a_theta = (-2.0 * c.c2 / (theta * theta * c.gravity)) * a;
  d.hessian.block<2, 1>(2, 4) = a_theta;
  d.hessian.block<1, 2>(4, 2) = a_theta.transpose();
  d.hessian(4, 4) = 2.0 * c.c2 / (theta * theta * theta) * drag;
  return d;
}

// ---------------------------------------------------------------------------
// Interference factor f_j(ρ) = (Σ_{k≠j} h_k/ρ_k + 1)^{-1}

inline double interference_sum(std::span<const double> rho, int j, std::span<const double> snr) {
  double sum = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (static_cast<int>(k) == j) continue;
    if (!(rho[k] > 0.0)) throw std::domain_error("f_j requires positive rho for every interferer");
    sum += snr[k] / rho[k];
  }
  return sum;
}

inline double f_j(std::span<const double> rho, int j, std::span<const double> snr) {
  return 1.0 / (interference_sum(rho, j, snr) + 1.0);
}

struct InterferenceDerivatives {
  double value = 0.0;
  VectorXd gradient;  // over ρ_k, k ≠ j, in increasing k
  MatrixXd hessian;
};

/// Gradient f² h_k/ρ_k² and Hessian 2S⁻³(wwᵀ − S·diag(h_k/ρ_k³)) with
/// S = Σ h_k/ρ_k + 1 and w_k = h_k/ρ_k². Negative semidefinite by
/// Cauchy-Schwarz.
inline InterferenceDerivatives f_j_gradient_hessian(std::span<const double> rho, int j,
                                                    std::span<const double> snr) {
  const int J = static_cast<int>(rho.size());
  const double S = interference_sum(rho, j, snr) + 1.0;
  InterferenceDerivatives d;
  d.value = 1.0 / S;
  d.gradient.resize(J - 1);
  VectorXd curvature(J - 1);
  for (int k = 0, i = 0; k < J; ++k) {
    if (k == j) continue;
    d.gradient(i) = snr[k] / (rho[k] * rho[k]);
    curvature(i) = snr[k] / (rho[k] * rho[k] * rho[k]);
    ++i;
  }
  const VectorXd w = d.gradient;
  d.gradient /= S * S;
  d.hessian = (2.0 / (S * S * S)) * (w * w.transpose());
  d.hessian.diagonal() -= (2.0 / (S * S)) * curvature;
  return d;
}

}  // namespace skyplan::model
