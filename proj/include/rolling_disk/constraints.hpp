#pragma once

#include <cmath>

#include <Eigen/Core>

#include "rolling_disk/types.hpp"

namespace rolling_disk {

/// 2x5 no-slip constraint matrix A(q). A(q) * qdot = 0 says the material
/// point of the rim touching the ground is at rest: row 0 forbids tangential
/// sliding, row 1 lateral sliding.
inline Mat25 constraint_matrix(const GenCoords& q, const Params& p) {
  const double r = p.r;
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.psi), cp = std::cos(q.psi);
  Mat25 A;
  A << 1, 0, -r * sp, -r * cp * ct, r * sp * st,
       0, 1, r * cp, -r * sp * ct, -r * cp * st;
  return A;
}

/// Completes the angular rates with the contact-point velocities that satisfy
/// the no-slip condition.
inline GenVel consistent_velocity(const GenCoords& q, const AngularRates& w, const Params& p) {
  const double r = p.r;
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.psi), cp = std::cos(q.psi);
  return {r * sp * w.dphi + r * cp * ct * w.dtheta - r * sp * st * w.dpsi,
          -r * cp * w.dphi + r * sp * ct * w.dtheta + r * cp * st * w.dpsi,
          w.dphi, w.dtheta, w.dpsi};
}

/// A(q) * qdot, zero iff the disk rolls without slipping.
inline Eigen::Vector2d constraint_residual(const GenCoords& q, const GenVel& v, const Params& p) {
  return constraint_matrix(q, p) * v.vec();
}

/// Generalized ground reaction tau = A(q)^T * lambda. Does no work on any
/// velocity admitted by the constraint.
inline Vec5 constraint_forces(const GenCoords& q, const Multipliers& lam, const Params& p) {
  return constraint_matrix(q, p).transpose() * Eigen::Vector2d(lam.lambda1, lam.lambda2);
}

}  // namespace rolling_disk
