#pragma once

#include <cmath>
#include <stdexcept>

#include "rolling_disk/constraints.hpp"
#include "rolling_disk/types.hpp"

namespace rolling_disk {

/// Closed-form angular accelerations of the rolling disk.
///
/// These are the (phi, theta, psi) rows of the solution of the augmented
/// system, simplified by hand. tan(theta) is evaluated as sin/cos using the
/// same guarded cosine as the 1/cos(theta) in the heading row.
inline AngularRates closed_form_accels(const GenCoords& q, const AngularRates& w,
                                       const Params& p) {
  const double ct = guarded_cos(q.theta, "closed_form_accels");
  const double st = std::sin(q.theta);
  const double tt = st / ct;
  return {2.0 * w.dphi * w.dtheta * tt + 5.0 / 3.0 * w.dtheta * w.dpsi * ct,
          4.0 / (5.0 * p.r) * p.g * st - 6.0 / 5.0 * w.dphi * w.dpsi * ct +
              0.5 * w.dpsi * w.dpsi * std::sin(2.0 * q.theta),
          2.0 * w.dphi * w.dtheta / ct};
}

/// Closed-form ground reactions.
inline Multipliers closed_form_multipliers(const GenCoords& q, const AngularRates& w,
                                           const Params& p) {
  guarded_cos(q.theta, "closed_form_multipliers");
  const double m = p.m, g = p.g, r = p.r;
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.psi), cp = std::cos(q.psi);
  const double s2t = std::sin(2.0 * q.theta);
  const double dph = w.dphi, dth = w.dtheta, dps = w.dpsi;
  const double l1 = m *
                    (6.0 * g * s2t * cp - 15.0 * r * dth * dth * st * cp -
                     5.0 * r * dth * dps * sp * ct + 18.0 * r * dph * dps * st * st * cp -
                     3.0 * r * dph * dps * cp - 15.0 * r * dps * dps * st * st * st * cp) /
                    15.0;
  const double l2 = m *
                    (6.0 * g * s2t * sp - 15.0 * r * dth * dth * st * sp +
                     5.0 * r * dth * dps * ct * cp + 18.0 * r * dph * dps * st * st * sp -
                     3.0 * r * dph * dps * sp - 15.0 * r * dps * dps * st * st * st * sp) /
                    15.0;
  return {l1, l2};
}

/// Closed-form contact accelerations (ddc1, ddc2). Not used by the state
/// equation, which reconstructs the contact velocity instead; kept to check the
/// linear solve row for row.
inline Eigen::Vector2d closed_form_center_accels(const GenCoords& q, const AngularRates& w,
                                                 const Params& p) {
  guarded_cos(q.theta, "closed_form_center_accels");
  const double g = p.g, r = p.r;
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.psi), cp = std::cos(q.psi);
  const double s2t = std::sin(2.0 * q.theta);
  const double dph = w.dphi, dth = w.dtheta, dps = w.dpsi;
  const double st3 = st * st * st;
  return {2.0 * g * s2t * cp / 5.0 - r * dth * dth * st * cp - r / 3.0 * dth * dps * sp * ct +
              6.0 / 5.0 * r * dph * dps * st * st * cp - r / 5.0 * dph * dps * cp -
              r * dps * dps * st3 * cp,
          2.0 * g * s2t * sp / 5.0 - r * dth * dth * st * sp + r / 3.0 * dth * dps * ct * cp +
              6.0 / 5.0 * r * dph * dps * st * st * sp - r / 5.0 * dph * dps * sp -
              r * dps * dps * st3 * sp};
}

inline StateDeriv state_derivative(const State& x, const Params& p) {
  const GenCoords q = x.coords();
  const AngularRates w = x.rates();
  const AngularRates acc = closed_form_accels(q, w, p);
  const GenVel v = consistent_velocity(q, w, p);
  return {v.dc1, v.dc2, x.dphi, x.dtheta, x.dpsi, acc.dphi, acc.dtheta, acc.dpsi};
}

/// Spin rate that keeps theta stationary for a disk turning at heading rate
/// dpsi with theta_dot = 0, i.e. a steady circular roll.
inline double circular_spin(double theta, double dpsi, const Params& p) {
  if (dpsi == 0.0) throw std::invalid_argument("circular_spin: heading rate must be non-zero");
  const double ct = guarded_cos(theta, "circular_spin");
  return 2.0 / (3.0 * p.r * dpsi) * p.g * (std::sin(theta) / ct) +
         5.0 / 6.0 * dpsi * std::sin(theta);
}

}  // namespace rolling_disk
