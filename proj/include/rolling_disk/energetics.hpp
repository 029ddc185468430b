#pragma once

#include <cmath>

#include "rolling_disk/kinematics.hpp"
#include "rolling_disk/types.hpp"

namespace rolling_disk {

/// Disk center. The height is fixed by ground contact: c3 = r cos(theta).
inline Vec3 center_position(const GenCoords& q, const Params& p) {
  return {q.c1, q.c2, p.r * std::cos(q.theta)};
}

inline Vec3 center_velocity(const GenCoords& q, const GenVel& v, const Params& p) {
  return {v.dc1, v.dc2, -p.r * std::sin(q.theta) * v.dtheta};
}

/// Principal inertia of a thin uniform disk about its center; the symmetry
/// axis is body x.
inline Mat3 inertia_matrix(const Params& p) {
  const double mr2 = p.m * p.r * p.r;
  return Vec3(mr2 / 2.0, mr2 / 4.0, mr2 / 4.0).asDiagonal();
}

inline double potential_energy(const GenCoords& q, const Params& p) {
  return p.m * p.g * p.r * std::cos(q.theta);
}

/// Rotational plus translational kinetic energy, built from the body rotation
/// vector and the center velocity.
inline double kinetic_energy(const GenCoords& q, const GenVel& v, const Params& p) {
  const Vec3 w = rotation_vector(q.angles(), v.rates());
  const Vec3 cd = center_velocity(q, v, p);
  return 0.5 * w.dot(inertia_matrix(p) * w) + 0.5 * p.m * cd.squaredNorm();
}

/// Closed-form Lagrangian L(q, qdot). Production path; the definitional
/// kinetic_energy - potential_energy is kept as a cross-check.
inline double lagrangian(const GenCoords& q, const GenVel& v, const Params& p) {
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double m = p.m, r = p.r;
  const double spin = v.dphi - st * v.dpsi;
  return 0.5 * m * (v.dc1 * v.dc1 + v.dc2 * v.dc2 + r * r * st * st * v.dtheta * v.dtheta) +
         m * r * r / 8.0 *
             (2.0 * spin * spin + v.dtheta * v.dtheta + ct * ct * v.dpsi * v.dpsi) -
         m * p.g * r * ct;
}

}  // namespace rolling_disk
