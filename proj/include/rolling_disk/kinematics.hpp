#pragma once

#include <cmath>
#include <stdexcept>

#include "rolling_disk/types.hpp"

namespace rolling_disk {

/// Elementary rotation about the body x axis (spin).
inline Rot3 rotation_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Rot3 R;
  R << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return R;
}

/// Elementary rotation about y (stand angle).
inline Rot3 rotation_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Rot3 R;
  R << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return R;
}

/// Elementary rotation about z (heading).
inline Rot3 rotation_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Rot3 R;
  R << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return R;
}

/// Body-to-world orientation R = Rz(psi) * Ry(theta) * Rx(phi), written out
/// entry by entry.
inline Rot3 euler_rotation(const EulerAngles& a) {
  const double cf = std::cos(a.phi), sf = std::sin(a.phi);
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cp = std::cos(a.psi), sp = std::sin(a.psi);
  Rot3 R;
  R << ct * cp, -cf * sp + st * cp * sf, sp * sf + st * cp * cf,
       ct * sp, cp * cf + st * sp * sf, -cp * sf + st * cf * sp,
       -st, ct * sf, ct * cf;
  return R;
}

/// Angular velocity in body coordinates, as a function of the Euler angles and
/// their rates. Linear in the rates.
inline Vec3 rotation_vector(const EulerAngles& a, const AngularRates& w) {
  const double cf = std::cos(a.phi), sf = std::sin(a.phi);
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  return {w.dphi - w.dpsi * st,
          w.dtheta * cf + w.dpsi * sf * ct,
          -w.dtheta * sf + w.dpsi * ct * cf};
}

/// Skew-symmetric matrix [v]x such that [v]x * u = v x u.
inline Mat3 skew_build(const Vec3& v) {
  Mat3 W;
  W << 0, -v[2], v[1],
       v[2], 0, -v[0],
       -v[1], v[0], 0;
  return W;
}

/// Recovers v from a skew-symmetric W = [v]x. Rejects inputs whose symmetric
/// part exceeds `tolerance` in max-norm instead of repairing them.
inline Vec3 skew_extract(const Mat3& W, double tolerance = 1e-8) {
  const double asym = (W + W.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= tolerance))
    throw std::domain_error("skew_extract: matrix is not skew-symmetric (|W+W^T| = " +
                            std::to_string(asym) + ")");
  return {-W(1, 2), W(0, 2), -W(0, 1)};
}

}  // namespace rolling_disk
