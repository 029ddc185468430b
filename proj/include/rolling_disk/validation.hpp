#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

#include "rolling_disk/assembly.hpp"
#include "rolling_disk/constraints.hpp"
#include "rolling_disk/dynamics.hpp"
#include "rolling_disk/types.hpp"

namespace rolling_disk {

inline constexpr double kClosedFormTolerance = 1e-9;
inline constexpr double kOracleTolerance = 1e-5;

/// Normwise relative error ||a - b||_inf / ||b||_inf; falls back to the
/// absolute error when the reference vanishes.
template <typename A, typename B>
double relative_error(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double diff = (a - b).cwiseAbs().maxCoeff();
  const double ref = b.cwiseAbs().maxCoeff();
  return ref > 0.0 ? diff / ref : diff;
}

struct RandomSample {
  GenCoords q;
  GenVel v;  // no-slip consistent
  GenVel v_free;  // arbitrary contact velocities, for the Euler-Lagrange check
  GenAccel a;
};

/// Samples states away from the flat-disk singularity: c in [-2,2]^2,
/// phi, psi in [-pi, pi], theta in [-1.2, 1.2], every rate and acceleration in
/// [-3, 3].
class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed, Params p = Params::reference())
      : rng_(seed), params_(p) {}

  RandomSample next() {
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> tilt(-1.2, 1.2);
    std::uniform_real_distribution<double> rate(-3.0, 3.0);
    RandomSample s;
    s.q = {pos(rng_), pos(rng_), ang(rng_), tilt(rng_), ang(rng_)};
    const AngularRates w{rate(rng_), rate(rng_), rate(rng_)};
    s.v = consistent_velocity(s.q, w, params_);
    s.v_free = {rate(rng_), rate(rng_), w.dphi, w.dtheta, w.dpsi};
    s.a = {rate(rng_), rate(rng_), rate(rng_), rate(rng_), rate(rng_)};
    return s;
  }

 private:
  std::mt19937_64 rng_;
  Params params_;
};

/// The closed forms under test. Replaceable so a deliberately broken formula
/// can be fed through the sweep.
struct ClosedForms {
  std::function<AngularRates(const GenCoords&, const AngularRates&, const Params&)> accels =
      [](const GenCoords& q, const AngularRates& w, const Params& p) {
        return closed_form_accels(q, w, p);
      };
  std::function<Multipliers(const GenCoords&, const AngularRates&, const Params&)> multipliers =
      [](const GenCoords& q, const AngularRates& w, const Params& p) {
        return closed_form_multipliers(q, w, p);
      };
  std::function<Eigen::Vector2d(const GenCoords&, const AngularRates&, const Params&)>
      center_accels = [](const GenCoords& q, const AngularRates& w, const Params& p) {
        return closed_form_center_accels(q, w, p);
      };
  std::function<Vec5(const GenCoords&, const GenVel&, const GenAccel&, const Params&)> lhs =
      [](const GenCoords& q, const GenVel& v, const GenAccel& a, const Params& p) {
        return euler_lagrange_lhs(q, v, a, p);
      };
};

struct ValidationReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double max_closed_form_error = 0.0;  // closed forms vs linear solve
  double max_oracle_error = 0.0;       // closed-form Q vs finite-difference Q
  RandomSample worst_closed_form;
  RandomSample worst_oracle;

  bool closed_form_ok() const { return max_closed_form_error < kClosedFormTolerance; }
  bool oracle_ok() const { return max_oracle_error < kOracleTolerance; }
  bool passed() const { return closed_form_ok() && oracle_ok(); }
};

/// Error of the closed-form multipliers and accelerations against the solve
/// of the augmented system, each group measured normwise.
inline double closed_form_error(const RandomSample& s, const Params& p,
                                const ClosedForms& forms = {}) {
  const AngularRates w = s.v.rates();
  const SystemSolution sol = solve_system(s.q, s.v, p);
  const Multipliers lam = forms.multipliers(s.q, w, p);
  const AngularRates acc = forms.accels(s.q, w, p);
  const Eigen::Vector2d cacc = forms.center_accels(s.q, w, p);
  const Eigen::Vector2d lam_closed(lam.lambda1, lam.lambda2);
  const Vec5 acc_closed = (Vec5() << cacc[0], cacc[1], acc.dphi, acc.dtheta, acc.dpsi).finished();
  const Eigen::Vector2d lam_solved(sol.lambda.lambda1, sol.lambda.lambda2);
  return std::max(relative_error(lam_closed, lam_solved),
                  relative_error(acc_closed, sol.accel.vec()));
}

inline double oracle_error(const RandomSample& s, const Params& p, const ClosedForms& forms = {}) {
  return relative_error(forms.lhs(s.q, s.v_free, s.a, p), oracle_lhs(s.q, s.v_free, s.a, p));
}

inline ValidationReport validate_sweep(std::size_t samples, std::uint64_t seed,
                                       const Params& p = Params::reference(),
                                       const ClosedForms& forms = {}) {
  if (samples == 0) throw std::invalid_argument("validate_sweep: need at least one sample");
  ValidationReport rep;
  rep.samples = samples;
  rep.seed = seed;
  StateSampler sampler(seed, p);
  // NaN counts as the worst possible error and is never displaced.
  const auto worse = [](double e, double current) {
    if (std::isnan(current)) return false;
    return std::isnan(e) || e > current;
  };
  for (std::size_t i = 0; i < samples; ++i) {
    const RandomSample s = sampler.next();
    const double ec = closed_form_error(s, p, forms);
    if (i == 0 || worse(ec, rep.max_closed_form_error)) {
      rep.max_closed_form_error = ec;
      rep.worst_closed_form = s;
    }
    const double eo = oracle_error(s, p, forms);
    if (i == 0 || worse(eo, rep.max_oracle_error)) {
      rep.max_oracle_error = eo;
      rep.worst_oracle = s;
    }
  }
  return rep;
}

}  // namespace rolling_disk
