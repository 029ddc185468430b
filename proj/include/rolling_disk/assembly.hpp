#pragma once

// Augmented linear system for the multipliers and generalized accelerations.
//
// Unknowns are ordered (lambda1, lambda2, ddc1, ddc2, ddphi, ddtheta, ddpsi).
// Rows are ordered (constraint-1, constraint-2, EL-c1, EL-c2, EL-phi,
// EL-theta, EL-psi): the two differentiated no-slip rows d/dt(A qdot) = 0
// first, then the Euler-Lagrange rows Q - A^T lambda = 0. This ordering is
// part of the interface and is relied on by golden tests.

#include <cmath>

#include <Eigen/Core>
#include <Eigen/LU>

#include "rolling_disk/constraints.hpp"
#include "rolling_disk/energetics.hpp"
#include "rolling_disk/types.hpp"

namespace rolling_disk {

struct AugmentedSystem {
  Mat7 M = Mat7::Zero();
  Vec7 b = Vec7::Zero();
};

struct SystemSolution {
  Multipliers lambda;
  GenAccel accel;

  Vec7 vec() const {
    return (Vec7() << lambda.lambda1, lambda.lambda2, accel.ddc1, accel.ddc2, accel.ddphi,
            accel.ddtheta, accel.ddpsi)
        .finished();
  }
  static SystemSolution from(const Vec7& x) {
    return {{x[0], x[1]}, {x[2], x[3], x[4], x[5], x[6]}};
  }
};

/// Closed-form Euler-Lagrange left-hand side d/dt(dL/dqdot) - dL/dq.
inline Vec5 euler_lagrange_lhs(const GenCoords& q, const GenVel& v, const GenAccel& a,
                               const Params& p) {
  const double m = p.m, g = p.g, r = p.r;
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double s2t = std::sin(2.0 * q.theta);
  const double dph = v.dphi, dth = v.dtheta, dps = v.dpsi;
  Vec5 Q;
  Q[0] = m * a.ddc1;
  Q[1] = m * a.ddc2;
  Q[2] = 0.5 * m * r * r * (a.ddphi - a.ddpsi * st - dth * dps * ct);
  Q[3] = m * r / 8.0 *
         (-8.0 * g * st + 8.0 * r * a.ddtheta * st * st + 2.0 * r * a.ddtheta +
          4.0 * r * dth * dth * s2t + 4.0 * r * dph * dps * ct - r * dps * dps * s2t);
  Q[4] = m * r * r / 4.0 *
         (-2.0 * a.ddphi * st + a.ddpsi * st * st + a.ddpsi - 2.0 * dth * dph * ct +
          dth * dps * s2t);
  return Q;
}

/// Time derivative of the no-slip condition split as
/// d/dt(A qdot) = A(q) qddot + drift, with drift = (dA/dq . qdot) qdot.
struct ConstraintAccelRows {
  Mat25 coeff;
  Eigen::Vector2d drift;
};

inline ConstraintAccelRows constraint_accel_rows(const GenCoords& q, const GenVel& v,
                                                 const Params& p) {
  const double r = p.r;
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.psi), cp = std::cos(q.psi);
  const double dph = v.dphi, dth = v.dtheta, dps = v.dpsi;
  Eigen::Vector2d drift;
  drift[0] = r * (dth * dth * st * cp + 2.0 * dth * dps * sp * ct - dph * dps * cp +
                  dps * dps * st * cp);
  drift[1] = r * (dth * dth * st * sp - 2.0 * dth * dps * cp * ct - dph * dps * sp +
                  dps * dps * st * sp);
  return {constraint_matrix(q, p), drift};
}

/// 7x7 mass matrix of the augmented system; depends on q only.
inline Mat7 mass_matrix(const GenCoords& q, const Params& p) {
  const double m = p.m, r = p.r;
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.psi), cp = std::cos(q.psi);
  const double mr2 = m * r * r;
  Mat7 M;
  M << 0, 0, 1, 0, -r * sp, -r * ct * cp, r * st * sp,
       0, 0, 0, 1, r * cp, -r * sp * ct, -r * st * cp,
       -1, 0, m, 0, 0, 0, 0,
       0, -1, 0, m, 0, 0, 0,
       r * sp, -r * cp, 0, 0, mr2 / 2.0, 0, -mr2 * st / 2.0,
       r * ct * cp, r * sp * ct, 0, 0, 0, mr2 * (st * st + 0.25), 0,
       -r * st * sp, r * st * cp, 0, 0, -mr2 * st / 2.0, 0, mr2 * (st * st + 1.0) / 4.0;
  return M;
}

/// Right-hand side b(q, qdot) of M(q) (lambda, qddot) = b.
inline Vec7 rhs_vector(const GenCoords& q, const GenVel& v, const Params& p) {
  const double m = p.m, g = p.g, r = p.r;
  const double st = std::sin(q.theta), ct = std::cos(q.theta);
  const double sp = std::sin(q.psi), cp = std::cos(q.psi);
  const double s2t = std::sin(2.0 * q.theta);
  const double dph = v.dphi, dth = v.dtheta, dps = v.dpsi;
  Vec7 b;
  b[0] = r * (-dth * dth * st * cp - 2.0 * dth * dps * sp * ct + dph * dps * cp -
              dps * dps * st * cp);
  b[1] = r * (-dth * dth * st * sp + 2.0 * dth * dps * ct * cp + dph * dps * sp -
              dps * dps * st * sp);
  b[2] = 0.0;
  b[3] = 0.0;
  b[4] = m * r * r * dth * dps * ct / 2.0;
  b[5] = m * r / 8.0 *
         (8.0 * g * st - 4.0 * r * dth * dth * s2t - 4.0 * r * dph * dps * ct +
          r * dps * dps * s2t);
  b[6] = m * r * r / 2.0 * (dph - dps * st) * dth * ct;
  return b;
}

inline AugmentedSystem assemble_system(const GenCoords& q, const GenVel& v, const Params& p) {
  return {mass_matrix(q, p), rhs_vector(q, v, p)};
}

/// Dense LU with partial pivoting. Rejects a rank-deficient M when a pivot
/// falls below 1e-12 * ||M||_inf.
inline SystemSolution solve_augmented(const AugmentedSystem& sys, double theta) {
  const Eigen::PartialPivLU<Mat7> lu(sys.M);
  const double scale = sys.M.cwiseAbs().rowwise().sum().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > 1e-12 * scale)) throw SingularConfiguration(theta, "solve_system (rank)");
  return SystemSolution::from(lu.solve(sys.b));
}

/// Multipliers and accelerations from the closed-form M and b.
inline SystemSolution solve_system(const GenCoords& q, const GenVel& v, const Params& p) {
  guarded_cos(q.theta, "solve_system");
  return solve_augmented(assemble_system(q, v, p), q.theta);
}

// ---------------------------------------------------------------------------
// Finite-difference oracle. Everything below is built from the scalar
// Lagrangian and the constraint matrix only, never from the closed forms
// above.
// ---------------------------------------------------------------------------

// The outer d/dt differences an inner central difference, so roundoff scales
// like eps * |L| / (h * h_t). Steps near eps^(1/4) balance that against the
// O(h^2) truncation terms.
struct OracleSteps {
  double h = 3e-4;    // partial derivatives of L in q and qdot
  double h_t = 1e-4;  // outer d/dt along (q + s qdot, qdot + s qddot)
};

namespace detail {

inline Vec5 grad_wrt_vel(const Vec5& q, const Vec5& v, const Params& p, double h) {
  Vec5 g;
  for (int i = 0; i < 5; ++i) {
    Vec5 vp = v, vm = v;
    vp[i] += h;
    vm[i] -= h;
    g[i] = (lagrangian(GenCoords::from(q), GenVel::from(vp), p) -
            lagrangian(GenCoords::from(q), GenVel::from(vm), p)) /
           (2.0 * h);
  }
  return g;
}

inline Vec5 grad_wrt_pos(const Vec5& q, const Vec5& v, const Params& p, double h) {
  Vec5 g;
  for (int i = 0; i < 5; ++i) {
    Vec5 qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    g[i] = (lagrangian(GenCoords::from(qp), GenVel::from(v), p) -
            lagrangian(GenCoords::from(qm), GenVel::from(v), p)) /
           (2.0 * h);
  }
  return g;
}

}  // namespace detail

/// d/dt(dL/dqdot) - dL/dq by central differences of the scalar Lagrangian.
inline Vec5 oracle_lhs(const GenCoords& q, const GenVel& v, const GenAccel& a, const Params& p,
                       OracleSteps steps = {}) {
  const Vec5 qv = q.vec(), vv = v.vec(), av = a.vec();
  const double ht = steps.h_t;
  const Vec5 ddt = (detail::grad_wrt_vel(qv + ht * vv, vv + ht * av, p, steps.h) -
                    detail::grad_wrt_vel(qv - ht * vv, vv - ht * av, p, steps.h)) /
                   (2.0 * ht);
  return ddt - detail::grad_wrt_pos(qv, vv, p, steps.h);
}

/// d/ds [A(q + s qdot) qdot] at s = 0, by central differences.
inline Eigen::Vector2d oracle_constraint_drift(const GenCoords& q, const GenVel& v,
                                               const Params& p, double h = 1e-6) {
  const Vec5 qv = q.vec(), vv = v.vec();
  const Eigen::Vector2d up = constraint_matrix(GenCoords::from(qv + h * vv), p) * vv;
  const Eigen::Vector2d dn = constraint_matrix(GenCoords::from(qv - h * vv), p) * vv;
  return (up - dn) / (2.0 * h);
}

/// The augmented system assembled from the oracle alone. Q is affine in
/// qddot, so its columns are recovered by probing unit accelerations.
inline AugmentedSystem oracle_system(const GenCoords& q, const GenVel& v, const Params& p,
                                     OracleSteps steps = {}) {
  AugmentedSystem sys;
  const Mat25 A = constraint_matrix(q, p);
  sys.M.block<2, 5>(0, 2) = A;
  sys.M.block<5, 2>(2, 0) = -A.transpose();

  const Vec5 q0 = oracle_lhs(q, v, GenAccel{}, p, steps);
  for (int j = 0; j < 5; ++j) {
    Vec5 e = Vec5::Zero();
    e[j] = 1.0;
    sys.M.block<5, 1>(2, 2 + j) = oracle_lhs(q, v, GenAccel::from(e), p, steps) - q0;
  }
  sys.b.head<2>() = -oracle_constraint_drift(q, v, p);
  sys.b.tail<5>() = -q0;
  return sys;
}

inline SystemSolution oracle_solve(const GenCoords& q, const GenVel& v, const Params& p,
                                   OracleSteps steps = {}) {
  guarded_cos(q.theta, "oracle_solve");
  return solve_augmented(oracle_system(q, v, p, steps), q.theta);
}

}  // namespace rolling_disk
