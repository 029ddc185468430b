#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rolling_disk/constraints.hpp"

namespace rolling_disk {
namespace {

const Params kRef = Params::reference();
constexpr double kPi = std::numbers::pi;

class ConstraintSampling : public ::testing::Test {
 protected:
  std::mt19937_64 rng{101};
  std::uniform_real_distribution<double> u{-3.0, 3.0};
  GenCoords coords() { return {u(rng), u(rng), u(rng), u(rng), u(rng)}; }
  AngularRates rates() { return {u(rng), u(rng), u(rng)}; }
};

TEST(ConstraintMatrix, UprightHeadingZero) {
  Mat25 expected;
  expected << 1, 0, 0, -1, 0,
              0, 1, 1, 0, 0;
  EXPECT_LT((constraint_matrix({0, 0, 0, 0, 0}, kRef) - expected).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(ConstraintMatrix, UprightHeadingQuarterTurn) {
  Mat25 expected;
  expected << 1, 0, -1, 0, 0,
              0, 1, 0, -1, 0;
  EXPECT_LT((constraint_matrix({0, 0, 0, 0, kPi / 2}, kRef) - expected).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST_F(ConstraintSampling, IdentityBlockAndBoundedEntries) {
  const Params p{5.0, 9.81, 0.7};
  for (int i = 0; i < 1000; ++i) {
    const Mat25 A = constraint_matrix(coords(), p);
    ASSERT_EQ(A.leftCols<2>(), Eigen::Matrix2d::Identity());
    ASSERT_LE(A.rightCols<3>().cwiseAbs().maxCoeff(), p.r);
  }
}

// The three single-rate motions: pure spin, pure tilt, pure turn.
TEST(ConsistentVelocity, PureSpin) {
  const GenVel v = consistent_velocity({0, 0, 0, 0.3, 0}, {2.0, 0, 0}, kRef);
  EXPECT_NEAR(v.dc1, 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(v.dc2, -2.0);
}

TEST(ConsistentVelocity, PureTilt) {
  const double th = 0.4, ps = 1.1, w = 1.7;
  const GenVel v = consistent_velocity({0, 0, 0, th, ps}, {0, w, 0}, kRef);
  EXPECT_DOUBLE_EQ(v.dc1, std::cos(ps) * std::cos(th) * w);
  EXPECT_DOUBLE_EQ(v.dc2, std::sin(ps) * std::cos(th) * w);
}

TEST(ConsistentVelocity, PureTurn) {
  const double th = 0.4, ps = 1.1, w = -0.6;
  const GenVel v = consistent_velocity({0, 0, 0, th, ps}, {0, 0, w}, kRef);
  EXPECT_DOUBLE_EQ(v.dc1, -std::sin(ps) * std::sin(th) * w);
  EXPECT_DOUBLE_EQ(v.dc2, std::cos(ps) * std::sin(th) * w);
}

TEST_F(ConstraintSampling, ConsistentVelocityHasZeroResidual) {
  for (int i = 0; i < 1000; ++i) {
    const GenCoords q = coords();
    const GenVel v = consistent_velocity(q, rates(), kRef);
    ASSERT_LT(constraint_residual(q, v, kRef).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(ConstraintResidual, PerturbedContactVelocity) {
  const GenCoords q{0, 0, 0.2, 0.3, 0.4};
  GenVel v = consistent_velocity(q, {1.0, -0.5, 0.25}, kRef);
  const double eps = 1e-3;
  v.dc1 += eps;
  const Eigen::Vector2d res = constraint_residual(q, v, kRef);
  EXPECT_NEAR(res[0], eps, 1e-15);
  EXPECT_NEAR(res[1], 0.0, 1e-15);
}

TEST(ConstraintResidual, SlidingState) {
  EXPECT_EQ(constraint_residual({0, 0, 0.3, 0.2, 0.1}, {1, 0, 0, 0, 0}, kRef),
            Eigen::Vector2d(1, 0));
}

TEST(ConstraintForces, ZeroMultipliers) {
  EXPECT_EQ(constraint_forces({1, 2, 3, 0.4, 5}, {0, 0}, kRef), Vec5::Zero());
}

TEST(ConstraintForces, UnitFirstMultiplierUpright) {
  const Vec5 tau = constraint_forces({0, 0, 0, 0, 0}, {1, 0}, kRef);
  EXPECT_LT((tau - (Vec5() << 1, 0, 0, -1, 0).finished()).cwiseAbs().maxCoeff(), 1e-16);
}

TEST_F(ConstraintSampling, ForcesMatchLiteralColumns) {
  for (int i = 0; i < 200; ++i) {
    const GenCoords q = coords();
    const Multipliers lam{u(rng), u(rng)};
    const double r = kRef.r;
    const double st = std::sin(q.theta), ct = std::cos(q.theta);
    const double sp = std::sin(q.psi), cp = std::cos(q.psi);
    const Vec5 col1 = (Vec5() << 1, 0, -r * sp, -r * cp * ct, r * sp * st).finished();
    const Vec5 col2 = (Vec5() << 0, 1, r * cp, -r * sp * ct, -r * cp * st).finished();
    const Vec5 literal = lam.lambda1 * col1 + lam.lambda2 * col2;
    ASSERT_LT((constraint_forces(q, lam, kRef) - literal).cwiseAbs().maxCoeff(), 1e-14);
  }
}

// The ground does no work on any rolling motion.
TEST_F(ConstraintSampling, ZeroWorkOnAdmissibleVelocities) {
  for (int i = 0; i < 1000; ++i) {
    const GenCoords q = coords();
    const Multipliers lam{10.0 * u(rng), 10.0 * u(rng)};
    const Vec5 tau = constraint_forces(q, lam, kRef);
    const auto N = testing::null_space_basis(constraint_matrix(q, kRef));
    for (int k = 0; k < 3; ++k) ASSERT_LT(std::abs(tau.dot(N.col(k))), 1e-12);
    const Vec5 v = N * Eigen::Vector3d(u(rng), u(rng), u(rng));
    ASSERT_LT(std::abs(tau.dot(v)), 1e-12 * (1.0 + v.cwiseAbs().maxCoeff()));
  }
}

}  // namespace
}  // namespace rolling_disk
