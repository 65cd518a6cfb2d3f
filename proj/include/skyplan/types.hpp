#pragma once

#include <Eigen/Core>

#include <cmath>

namespace skyplan {

using Vec2 = Eigen::Vector2d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace skyplan
