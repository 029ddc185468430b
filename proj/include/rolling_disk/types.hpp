#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rolling_disk {

using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Vec10 = Eigen::Matrix<double, 10, 1>;
using Rot3 = Eigen::Matrix3d;
using Mat3 = Eigen::Matrix3d;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat25 = Eigen::Matrix<double, 2, 5>;

/// Below this value of |cos(theta)| the disk is treated as lying flat and the
/// state equations are rejected.
inline constexpr double kSingularCos = 1e-6;

/// Raised when the disk is (numerically) horizontal. Heading and spin are
/// undefined there and the equations of motion divide by cos(theta).
class SingularConfiguration : public std::runtime_error {
 public:
  explicit SingularConfiguration(double theta, const std::string& where = "")
      : std::runtime_error(describe(theta, where)), theta_(theta) {}

  double theta() const noexcept { return theta_; }

 private:
  static std::string describe(double theta, const std::string& where) {
    std::ostringstream os;
    os.precision(17);
    os << "singular configuration (disk horizontal): theta=" << theta
       << ", |cos(theta)|=" << std::abs(std::cos(theta));
    if (!where.empty()) os << " in " << where;
    return os.str();
  }

  double theta_;
};

inline bool is_singular(double theta) noexcept {
  return !(std::abs(std::cos(theta)) > kSingularCos);
}

/// Throws SingularConfiguration if theta is within the flat-disk guard band,
/// otherwise returns cos(theta).
inline double guarded_cos(double theta, const char* where = "") {
  const double c = std::cos(theta);
  if (!(std::abs(c) > kSingularCos)) throw SingularConfiguration(theta, where);
  return c;
}

/// Physical constants of the disk. SI units.
struct Params {
  double m = 5.0;   // kg
  double g = 9.81;  // m/s^2
  double r = 1.0;   // m

  static Params reference() { return {}; }

  void validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("mass must be positive");
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("gravity must be positive");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("radius must be positive");
  }
};

/// Spin, stand and heading angles. Never wrapped.
struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

/// Time derivatives of the Euler angles.
struct AngularRates {
  double dphi = 0.0;
  double dtheta = 0.0;
  double dpsi = 0.0;

  AngularRates operator*(double s) const { return {dphi * s, dtheta * s, dpsi * s}; }
};

/// Generalized coordinates q = (c1, c2, phi, theta, psi).
struct GenCoords {
  double c1 = 0.0;
  double c2 = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;

  EulerAngles angles() const { return {phi, theta, psi}; }

  Vec5 vec() const { return (Vec5() << c1, c2, phi, theta, psi).finished(); }
  static GenCoords from(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Generalized velocities qdot of the sliding ("frozen lake") formulation.
struct GenVel {
  double dc1 = 0.0;
  double dc2 = 0.0;
  double dphi = 0.0;
  double dtheta = 0.0;
  double dpsi = 0.0;

  AngularRates rates() const { return {dphi, dtheta, dpsi}; }

  Vec5 vec() const { return (Vec5() << dc1, dc2, dphi, dtheta, dpsi).finished(); }
  static GenVel from(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Generalized accelerations qddot.
struct GenAccel {
  double ddc1 = 0.0;
  double ddc2 = 0.0;
  double ddphi = 0.0;
  double ddtheta = 0.0;
  double ddpsi = 0.0;

  Vec5 vec() const { return (Vec5() << ddc1, ddc2, ddphi, ddtheta, ddpsi).finished(); }
  static GenAccel from(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Ground reaction multipliers (N).
struct Multipliers {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// Rolling state x = (c1, c2, phi, theta, psi, dphi, dtheta, dpsi).
/// The contact velocities are not part of the state; they follow from the
/// no-slip condition.
struct State {
  double c1 = 0.0;
  double c2 = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
  double dphi = 0.0;
  double dtheta = 0.0;
  double dpsi = 0.0;

  GenCoords coords() const { return {c1, c2, phi, theta, psi}; }
  AngularRates rates() const { return {dphi, dtheta, dpsi}; }

  Vec8 vec() const {
    return (Vec8() << c1, c2, phi, theta, psi, dphi, dtheta, dpsi).finished();
  }
  static State from(const Vec8& v) { return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]}; }

  bool operator==(const State&) const = default;
};

/// Time derivative of State, same component order.
struct StateDeriv {
  double dc1 = 0.0;
  double dc2 = 0.0;
  double dphi = 0.0;
  double dtheta = 0.0;
  double dpsi = 0.0;
  double ddphi = 0.0;
  double ddtheta = 0.0;
  double ddpsi = 0.0;

  Vec8 vec() const {
    return (Vec8() << dc1, dc2, dphi, dtheta, dpsi, ddphi, ddtheta, ddpsi).finished();
  }
};

}  // namespace rolling_disk
