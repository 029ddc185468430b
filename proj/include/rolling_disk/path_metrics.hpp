#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rolling_disk/constraints.hpp"
#include "rolling_disk/dynamics.hpp"
#include "rolling_disk/simulator.hpp"

namespace rolling_disk {

struct CircleFit {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  double min_distance = 0.0;
  double max_distance = 0.0;

  /// (max - min) distance to the fitted center, relative to the radius.
  double relative_spread() const { return (max_distance - min_distance) / radius; }
};

/// Algebraic least-squares circle through the (c1, c2) track:
/// minimizes sum (x^2 + y^2 + D x + E y + F)^2.
inline CircleFit fit_circle(const Trajectory& traj) {
  const auto n = static_cast<Eigen::Index>(traj.samples.size());
  if (n < 3) throw std::invalid_argument("fit_circle: need at least three samples");
  Eigen::MatrixX3d lhs(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const State& x = traj.samples[static_cast<std::size_t>(i)].state;
    lhs.row(i) << x.c1, x.c2, 1.0;
    rhs[i] = -(x.c1 * x.c1 + x.c2 * x.c2);
  }
  const Eigen::Vector3d def = lhs.colPivHouseholderQr().solve(rhs);
  CircleFit fit;
  fit.center_x = -def[0] / 2.0;
  fit.center_y = -def[1] / 2.0;
  fit.radius = std::sqrt(fit.center_x * fit.center_x + fit.center_y * fit.center_y - def[2]);
  fit.min_distance = std::numeric_limits<double>::infinity();
  for (const Sample& s : traj.samples) {
    const double d = std::hypot(s.state.c1 - fit.center_x, s.state.c2 - fit.center_y);
    fit.min_distance = std::min(fit.min_distance, d);
    fit.max_distance = std::max(fit.max_distance, d);
  }
  return fit;
}

/// Signed curvature of the contact track at a state, from the no-slip
/// velocity and the closed-form contact acceleration.
inline double track_curvature(const State& x, const Params& p) {
  const GenCoords q = x.coords();
  const GenVel v = consistent_velocity(q, x.rates(), p);
  const Eigen::Vector2d acc = closed_form_center_accels(q, x.rates(), p);
  const double speed2 = v.dc1 * v.dc1 + v.dc2 * v.dc2;
  return (v.dc1 * acc[1] - v.dc2 * acc[0]) / std::pow(speed2, 1.5);
}

inline std::vector<double> track_curvatures(const Trajectory& traj) {
  std::vector<double> k;
  k.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) k.push_back(track_curvature(s.state, traj.params));
  return k;
}

}  // namespace rolling_disk
