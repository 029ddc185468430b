#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <locale>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rolling_disk/assembly.hpp"
#include "rolling_disk/constraints.hpp"
#include "rolling_disk/dynamics.hpp"
#include "rolling_disk/energetics.hpp"
#include "rolling_disk/types.hpp"

namespace rolling_disk {

enum class Integrator { rk4, euler };

inline std::string_view to_string(Integrator i) { return i == Integrator::rk4 ? "rk4" : "euler"; }

inline Integrator parse_integrator(std::string_view s) {
  if (s == "rk4") return Integrator::rk4;
  if (s == "euler") return Integrator::euler;
  throw std::invalid_argument("unknown integrator '" + std::string(s) + "'");
}

struct ScenarioConfig {
  std::string name = "custom";
  Params params;
  State x0;
  double t_end = 1.0;
  double dt = 1e-3;
  Integrator integrator = Integrator::rk4;

  void validate() const {
    params.validate();
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (dt > t_end) throw std::invalid_argument("dt must not exceed t_end");
    if (!x0.vec().allFinite()) throw std::invalid_argument("initial state must be finite");
  }

  /// Number of fixed steps; the last sample lands at steps()*dt >= t_end.
  std::size_t steps() const {
    return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  }
};

struct Sample {
  double t = 0.0;
  State state;
  double energy = 0.0;    // J
  double residual = 0.0;  // max |A(q) qdot|, m/s
};

struct Failure {
  double t = 0.0;
  double theta = 0.0;
  std::string message;
};

/// Uniformly spaced samples, one per integration step, plus the initial state.
struct Trajectory {
  std::vector<Sample> samples;
  Params params;
  std::string scenario;
  double dt = 0.0;
  Integrator integrator = Integrator::rk4;
  std::optional<Failure> failure;

  bool completed() const { return !failure.has_value(); }
  const Sample& back() const { return samples.back(); }
};

// ---------------------------------------------------------------------------
// One-step maps of the 8-dimensional rolling state.

inline Vec8 rolling_field(const Vec8& x, const Params& p) {
  return state_derivative(State::from(x), p).vec();
}

inline State step_rk4(const State& x, double dt, const Params& p) {
  const Vec8 x0 = x.vec();
  const Vec8 k1 = rolling_field(x0, p);
  const Vec8 k2 = rolling_field(x0 + 0.5 * dt * k1, p);
  const Vec8 k3 = rolling_field(x0 + 0.5 * dt * k2, p);
  const Vec8 k4 = rolling_field(x0 + dt * k3, p);
  return State::from(x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

inline State step_euler(const State& x, double dt, const Params& p) {
  const Vec8 x0 = x.vec();
  return State::from(x0 + dt * rolling_field(x0, p));
}

inline State step(const State& x, double dt, const Params& p, Integrator integrator) {
  return integrator == Integrator::rk4 ? step_rk4(x, dt, p) : step_euler(x, dt, p);
}

/// Kinetic plus potential energy with the contact velocity reconstructed from
/// the no-slip condition.
inline double total_energy(const State& x, const Params& p) {
  const GenCoords q = x.coords();
  const GenVel v = consistent_velocity(q, x.rates(), p);
  return kinetic_energy(q, v, p) + potential_energy(q, p);
}

namespace detail {

inline Sample rolling_sample(double t, const State& x, const Params& p) {
  const GenCoords q = x.coords();
  const GenVel v = consistent_velocity(q, x.rates(), p);
  return {t, x, kinetic_energy(q, v, p) + potential_energy(q, p),
          constraint_residual(q, v, p).cwiseAbs().maxCoeff()};
}

// cos(theta) changed sign over a step: the disk passed through the horizontal
// position without a sample landing inside the guard band.
inline bool crossed_singularity(double theta_before, double theta_after) {
  return std::cos(theta_before) * std::cos(theta_after) < 0.0;
}

inline Failure crossing_failure(double t, double dt, double theta) {
  std::ostringstream msg;
  msg.imbue(std::locale::classic());
  msg << "singular configuration crossed between t=" << t - dt << " and t=" << t
      << " (disk passed through horizontal)";
  return Failure{t, theta, msg.str()};
}

inline Trajectory empty_trajectory(const ScenarioConfig& cfg) {
  Trajectory traj;
  traj.params = cfg.params;
  traj.scenario = cfg.name;
  traj.dt = cfg.dt;
  traj.integrator = cfg.integrator;
  traj.samples.reserve(cfg.steps() + 1);
  return traj;
}

}  // namespace detail

/// Integrates the 8-dimensional state equation with a fixed step. A singular
/// configuration stops the run; the samples up to that point are kept and
/// `failure` records where it happened.
inline Trajectory integrate(const ScenarioConfig& cfg) {
  cfg.validate();
  Trajectory traj = detail::empty_trajectory(cfg);
  const Params& p = cfg.params;
  State x = cfg.x0;
  double theta_prev = x.theta;
  const std::size_t n = cfg.steps();
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * cfg.dt;
    if (is_singular(x.theta)) {
      traj.failure = Failure{t, x.theta, SingularConfiguration(x.theta, "integrate").what()};
      break;
    }
    if (detail::crossed_singularity(theta_prev, x.theta)) {
      traj.failure = detail::crossing_failure(t, cfg.dt, x.theta);
      break;
    }
    traj.samples.push_back(detail::rolling_sample(t, x, p));
    if (i == n) break;
    theta_prev = x.theta;
    try {
      x = step(x, cfg.dt, p, cfg.integrator);
    } catch (const SingularConfiguration& e) {
      traj.failure = Failure{t, e.theta(), e.what()};
      break;
    }
  }
  return traj;
}

/// Integrates the sliding formulation (q, qdot) in R^10 with qddot taken from
/// the augmented linear solve. The contact velocities are integrated rather
/// than reconstructed, so the no-slip residual measures how well the
/// differentiated constraint holds the motion on the constraint manifold.
inline Trajectory integrate_10dim(const ScenarioConfig& cfg) {
  cfg.validate();
  Trajectory traj = detail::empty_trajectory(cfg);
  const Params& p = cfg.params;

  auto field = [&p](const Vec10& y) {
    const GenCoords q = GenCoords::from(y.head<5>());
    const GenVel v = GenVel::from(y.tail<5>());
    Vec10 dy;
    dy.head<5>() = y.tail<5>();
    dy.tail<5>() = solve_system(q, v, p).accel.vec();
    return dy;
  };
  auto sample = [&p](double t, const Vec10& y) {
    const GenCoords q = GenCoords::from(y.head<5>());
    const GenVel v = GenVel::from(y.tail<5>());
    const State x{q.c1, q.c2, q.phi, q.theta, q.psi, v.dphi, v.dtheta, v.dpsi};
    return Sample{t, x, kinetic_energy(q, v, p) + potential_energy(q, p),
                  constraint_residual(q, v, p).cwiseAbs().maxCoeff()};
  };

  Vec10 y;
  y.head<5>() = cfg.x0.coords().vec();
  y.tail<5>() = consistent_velocity(cfg.x0.coords(), cfg.x0.rates(), p).vec();

  const double dt = cfg.dt;
  double theta_prev = y[3];
  const std::size_t n = cfg.steps();
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * dt;
    if (is_singular(y[3])) {
      traj.failure = Failure{t, y[3], SingularConfiguration(y[3], "integrate_10dim").what()};
      break;
    }
    if (detail::crossed_singularity(theta_prev, y[3])) {
      traj.failure = detail::crossing_failure(t, dt, y[3]);
      break;
    }
    traj.samples.push_back(sample(t, y));
    if (i == n) break;
    theta_prev = y[3];
    try {
      if (cfg.integrator == Integrator::rk4) {
        const Vec10 k1 = field(y);
        const Vec10 k2 = field(y + 0.5 * dt * k1);
        const Vec10 k3 = field(y + 0.5 * dt * k2);
        const Vec10 k4 = field(y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      } else {
        y += dt * field(y);
      }
    } catch (const SingularConfiguration& e) {
      traj.failure = Failure{t, e.theta(), e.what()};
      break;
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Presets

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"precession", "circle", "straight", "spin"};
  return names;
}

/// Named initial conditions, by default with m = 5 kg, g = 9.81 m/s^2,
/// r = 1 m. The circle spin rate is recomputed for the given constants.
///
///  precession  tilted disk launched rolling straight; it falls over slowly
///              while the heading starts to turn
///  circle      steady circular roll at theta = 0.5, heading rate 1
///  straight    upright disk rolling along -c2
///  spin        upright disk spinning about the vertical in place
inline ScenarioConfig scenario_preset(std::string_view name,
                                      const Params& params = Params::reference()) {
  ScenarioConfig cfg;
  cfg.name = std::string(name);
  cfg.params = params;
  cfg.dt = 1e-3;
  if (name == "precession") {
    cfg.x0 = {2.0, 0.0, 0.0, 0.1, 0.0, 2.5, 0.0, 0.0};
    cfg.t_end = 10.0;
  } else if (name == "circle") {
    const double theta = 0.5, dpsi = 1.0;
    cfg.x0 = {2.0, 0.0, 0.0, theta, 0.0, circular_spin(theta, dpsi, cfg.params), 0.0, dpsi};
    cfg.t_end = 6.0;
  } else if (name == "straight") {
    cfg.x0 = {2.0, 0.0, 0.0, 0.0, 0.0, 2.5, 0.0, 0.0};
    cfg.t_end = 10.0;
  } else if (name == "spin") {
    cfg.x0 = {2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
    cfg.t_end = 5.0;
  } else {
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Diagnostics

struct DiagnosticsSummary {
  std::size_t samples = 0;
  double max_energy_drift = 0.0;   // max |E(t) - E(0)| / |E(0)|
  double mean_energy_drift = 0.0;
  double max_residual = 0.0;
  double min_abs_cos_theta = 1.0;
  double max_theta_excursion = 0.0;  // max |theta(t) - theta(0)|
  double final_time = 0.0;
  State final_state;
  std::optional<Failure> failure;
};

inline DiagnosticsSummary diagnostics_summary(const Trajectory& traj) {
  if (traj.samples.empty()) throw std::invalid_argument("diagnostics_summary: empty trajectory");
  DiagnosticsSummary s;
  const Sample& first = traj.samples.front();
  const double e0 = first.energy;
  const double scale = e0 != 0.0 ? std::abs(e0) : 1.0;
  double drift_sum = 0.0;
  s.min_abs_cos_theta = std::numeric_limits<double>::infinity();
  for (const Sample& smp : traj.samples) {
    const double drift = std::abs(smp.energy - e0) / scale;
    s.max_energy_drift = std::max(s.max_energy_drift, drift);
    drift_sum += drift;
    s.max_residual = std::max(s.max_residual, smp.residual);
    s.min_abs_cos_theta = std::min(s.min_abs_cos_theta, std::abs(std::cos(smp.state.theta)));
    s.max_theta_excursion =
        std::max(s.max_theta_excursion, std::abs(smp.state.theta - first.state.theta));
  }
  s.samples = traj.samples.size();
  s.mean_energy_drift = drift_sum / static_cast<double>(s.samples);
  s.final_time = traj.back().t;
  s.final_state = traj.back().state;
  s.failure = traj.failure;
  return s;
}

}  // namespace rolling_disk
