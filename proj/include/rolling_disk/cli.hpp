#pragma once

// Command-line front end: `simulate` runs a scenario and writes a CSV
// trajectory (optionally a gnuplot script), `validate` runs the seeded
// closed-form / oracle sweep.
//
// Exit codes: 0 success, 1 usage or input error, 2 singular configuration,
// 3 validation failure.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "rolling_disk/kinematics.hpp"
#include "rolling_disk/simulator.hpp"
#include "rolling_disk/validation.hpp"

namespace rolling_disk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSingular = 2;
inline constexpr int kExitValidation = 3;

inline constexpr std::size_t kDefaultEvery = 10;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { simulate, validate };

struct RunConfig {
  Mode mode = Mode::simulate;

  // simulate
  std::optional<std::string> scenario;
  std::optional<std::string> config_path;
  std::optional<double> m, g, r, t_end, dt, theta;
  std::optional<std::array<double, 8>> x0;
  std::optional<std::string> integrator;
  std::optional<std::string> out;
  bool emit_plot = false;
  std::size_t every = kDefaultEvery;

  // validate
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
};

// ---------------------------------------------------------------------------
// Argument parsing

namespace detail {

inline void build_app(CLI::App& app, RunConfig& cfg, CLI::App*& simulate, CLI::App*& validate,
                      std::vector<double>& x0, long long& samples) {
  app.require_subcommand(1);

  simulate = app.add_subcommand("simulate", "Integrate a scenario and write a CSV trajectory");
  auto* scen = simulate->add_option("--scenario", cfg.scenario,
                                    "Preset: precession | circle | straight | spin");
  auto* conf = simulate->add_option("--config", cfg.config_path, "JSON scenario file");
  scen->excludes(conf);
  simulate->add_option("--out", cfg.out, "CSV output path (default <scenario>.csv)");
  simulate->add_option("--dt", cfg.dt, "Step size [s]");
  simulate->add_option("--t-end", cfg.t_end, "Final time [s]");
  simulate->add_option("--m", cfg.m, "Mass [kg]");
  simulate->add_option("--g", cfg.g, "Gravity [m/s^2]");
  simulate->add_option("--r", cfg.r, "Radius [m]");
  simulate->add_option("--x0", x0, "Initial state c1 c2 phi theta psi dphi dtheta dpsi")
      ->expected(8);
  simulate->add_option("--theta", cfg.theta, "Override the initial stand angle [rad]");
  simulate->add_option("--integrator", cfg.integrator, "rk4 | euler");
  simulate->add_option("--every", cfg.every, "Write every k-th step to the CSV")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--emit-plot", cfg.emit_plot, "Also write a gnuplot script next to the CSV");

  validate = app.add_subcommand("validate", "Check the closed forms against the linear solve "
                                            "and the finite-difference oracle");
  validate->add_option("--samples", samples, "Number of random states")->capture_default_str();
  validate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
}

}  // namespace detail

/// Parses the command line (args[0] is the program name). Throws UsageError
/// with the help text appended on any problem; `--help` surfaces as
/// CLI::CallForHelp.
inline RunConfig parse_args(std::span<const std::string> args) {
  RunConfig cfg;
  std::vector<double> x0;
  long long samples = static_cast<long long>(cfg.samples);
  CLI::App app{"Rolling disk simulator", "rolling_disk"};
  CLI::App* simulate = nullptr;
  CLI::App* validate = nullptr;
  detail::build_app(app, cfg, simulate, validate, x0, samples);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n\n" + app.help());
  }

  if (simulate->parsed()) {
    cfg.mode = Mode::simulate;
    if (!cfg.scenario && !cfg.config_path)
      throw UsageError("simulate: one of --scenario or --config is required\n\n" + simulate->help());
    if (!x0.empty()) {
      std::array<double, 8> arr{};
      std::copy(x0.begin(), x0.end(), arr.begin());
      cfg.x0 = arr;
    }
  } else {
    cfg.mode = Mode::validate;
    if (samples < 1) throw UsageError("validate: --samples must be at least 1\n\n" + validate->help());
    cfg.samples = static_cast<std::size_t>(samples);
  }
  return cfg;
}

inline std::string usage() {
  RunConfig cfg;
  std::vector<double> x0;
  long long samples = 0;
  CLI::App app{"Rolling disk simulator", "rolling_disk"};
  CLI::App* s = nullptr;
  CLI::App* v = nullptr;
  detail::build_app(app, cfg, s, v, x0, samples);
  return app.help();
}

// ---------------------------------------------------------------------------
// Scenario files
//
//   { "name": "tilted", "m": 5, "g": 9.81, "r": 1,
//     "x0": [2, 0, 0, 0.1, 0, 2.5, 0, 0], "t_end": 10, "dt": 0.001,
//     "integrator": "rk4" }
//
// x0, t_end and dt are required; m, g, r default to 5, 9.81, 1.

inline ScenarioConfig parse_scenario_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");

  static const std::array<std::string_view, 8> known{"name", "m",  "g",  "r",
                                                     "x0",   "t_end", "dt", "integrator"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw UsageError("config: unknown key '" + key + "'");

  auto number = [&j](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_number()) throw UsageError(std::string("config: '") + key + "' must be a number");
    return j[key].get<double>();
  };
  auto require = [&](const char* key) {
    auto v = number(key);
    if (!v) throw UsageError(std::string("config: missing '") + key + "'");
    return *v;
  };

  ScenarioConfig cfg;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw UsageError("config: 'name' must be a string");
    cfg.name = j["name"].get<std::string>();
  }
  cfg.params.m = number("m").value_or(cfg.params.m);
  cfg.params.g = number("g").value_or(cfg.params.g);
  cfg.params.r = number("r").value_or(cfg.params.r);
  cfg.t_end = require("t_end");
  cfg.dt = require("dt");
  if (!j.contains("x0")) throw UsageError("config: missing 'x0'");
  const auto& x0 = j["x0"];
  if (!x0.is_array() || x0.size() != 8)
    throw UsageError("config: 'x0' must be an array of 8 numbers");
  Vec8 v;
  for (int i = 0; i < 8; ++i) {
    if (!x0[static_cast<std::size_t>(i)].is_number())
      throw UsageError("config: 'x0' must be an array of 8 numbers");
    v[i] = x0[static_cast<std::size_t>(i)].get<double>();
  }
  cfg.x0 = State::from(v);
  if (j.contains("integrator")) {
    if (!j["integrator"].is_string()) throw UsageError("config: 'integrator' must be a string");
    try {
      cfg.integrator = parse_integrator(j["integrator"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str());
}

/// Preset or file, then command-line overrides. Overrides are applied in
/// order params, x0, theta, timing.
inline ScenarioConfig resolve_scenario(const RunConfig& rc) {
  ScenarioConfig cfg;
  if (rc.config_path) {
    cfg = load_scenario_file(*rc.config_path);
    if (rc.m) cfg.params.m = *rc.m;
    if (rc.g) cfg.params.g = *rc.g;
    if (rc.r) cfg.params.r = *rc.r;
  } else {
    Params p = Params::reference();
    if (rc.m) p.m = *rc.m;
    if (rc.g) p.g = *rc.g;
    if (rc.r) p.r = *rc.r;
    try {
      p.validate();
      cfg = scenario_preset(*rc.scenario, p);
    } catch (const SingularConfiguration&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (rc.x0) cfg.x0 = State::from(Eigen::Map<const Vec8>(rc.x0->data()));
  if (rc.theta) cfg.x0.theta = *rc.theta;
  if (rc.t_end) cfg.t_end = *rc.t_end;
  if (rc.dt) cfg.dt = *rc.dt;
  if (rc.integrator) {
    try {
      cfg.integrator = parse_integrator(*rc.integrator);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Output

/// Locale-independent, 17 significant digits (round-trips every double).
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

/// Shortest representation that round-trips, for human-facing text.
inline std::string short_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline constexpr std::string_view kCsvHeader =
    "t,c1,c2,c3,phi,theta,psi,dphi,dtheta,dpsi,energy,residual";

/// Writes every `every`-th sample; the last sample is always written.
/// Returns the number of data rows.
inline std::size_t write_csv(std::ostream& os, const Trajectory& traj,
                             std::size_t every = kDefaultEvery) {
  if (every == 0) every = 1;
  os << kCsvHeader << '\n';
  std::size_t rows = 0;
  const std::size_t n = traj.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % every != 0 && i + 1 != n) continue;
    const Sample& s = traj.samples[i];
    const State& x = s.state;
    const double c3 = traj.params.r * std::cos(x.theta);
    const std::array<double, 12> row{s.t,     x.c1,     x.c2,   c3,       x.phi,     x.theta,
                                     x.psi,   x.dphi,   x.dtheta, x.dpsi, s.energy, s.residual};
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      os << format_number(row[k]);
    }
    os << '\n';
    ++rows;
  }
  return rows;
}

/// gnuplot script: top view of the center track with the disk outline at the
/// initial state.
inline void write_plot_script(std::ostream& os, const Trajectory& traj, const ScenarioConfig& cfg,
                              const std::string& csv_path) {
  const State& x0 = cfg.x0;
  const Rot3 R = euler_rotation({x0.phi, x0.theta, x0.psi});
  const Vec3 c{x0.c1, x0.c2, cfg.params.r * std::cos(x0.theta)};

  const std::filesystem::path csv(csv_path);
  std::filesystem::path png = csv;
  png.replace_extension(".png");

  os << "# rolling disk, scenario '" << traj.scenario << "', dt=" << short_number(traj.dt)
     << ", integrator=" << to_string(traj.integrator) << "\n";
  os << "# columns: " << kCsvHeader << "\n";
  os << "set datafile separator ','\n";
  os << "set terminal pngcairo size 900,900\n";
  os << "set output '" << png.filename().string() << "'\n";
  os << "set size ratio -1\n";
  os << "set grid\n";
  os << "set xlabel 'c1 [m]'\n";
  os << "set ylabel 'c2 [m]'\n";
  os << "set title 'top view: " << traj.scenario << "'\n";
  // Rim of the disk in world coordinates, projected onto the ground plane.
  os << "$disk << EOD\n";
  constexpr int kRim = 72;
  for (int i = 0; i <= kRim; ++i) {
    const double u = 2.0 * std::numbers::pi * i / kRim;
    const Vec3 p = c + cfg.params.r * (std::cos(u) * R.col(1) + std::sin(u) * R.col(2));
    os << format_number(p[0]) << ',' << format_number(p[1]) << '\n';
  }
  os << "EOD\n";
  os << "plot '" << csv.filename().string()
     << "' using 2:3 skip 1 with lines lw 2 lc rgb 'black' title 'center (c1, c2)', \\\n"
     << "     $disk using 1:2 with lines lw 2 lc rgb 'blue' title 'disk at t = 0'\n";
}

inline void print_summary(std::ostream& os, const ScenarioConfig& cfg, const Trajectory& traj,
                          std::size_t rows, const std::string& csv_path) {
  os << "scenario        " << cfg.name << "\n";
  os << "params          m=" << short_number(cfg.params.m) << " g=" << short_number(cfg.params.g)
     << " r=" << short_number(cfg.params.r) << "\n";
  os << "integrator      " << to_string(cfg.integrator) << " dt=" << short_number(cfg.dt)
     << " t_end=" << short_number(cfg.t_end) << "\n";
  os << "csv             " << csv_path << " (" << rows << " rows)\n";
  if (!traj.samples.empty()) {
    const DiagnosticsSummary d = diagnostics_summary(traj);
    os << std::scientific << std::setprecision(3);
    os << "samples         " << d.samples << "\n";
    os << "energy drift    max " << d.max_energy_drift << "  mean " << d.mean_energy_drift << "\n";
    os << "max residual    " << d.max_residual << "\n";
    os << "min |cos theta| " << d.min_abs_cos_theta << "\n";
    os << "max |theta(t) - theta(0)| " << d.max_theta_excursion << "\n";
    os << std::defaultfloat << std::setprecision(10);
    const State& x = d.final_state;
    os << "final           t=" << d.final_time << " c=(" << x.c1 << ", " << x.c2 << ") phi=" << x.phi
       << " theta=" << x.theta << " psi=" << x.psi << " rates=(" << x.dphi << ", " << x.dtheta
       << ", " << x.dpsi << ")\n";
    os << std::setprecision(6);
  }
  if (traj.failure) {
    os << "status          SINGULAR at t=" << short_number(traj.failure->t) << ": "
       << traj.failure->message << "\n";
  } else {
    os << "status          completed\n";
  }
}

// ---------------------------------------------------------------------------
// Commands

inline int run_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = resolve_scenario(rc);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const Trajectory traj = integrate(cfg);

  const std::string csv_path = rc.out.value_or(cfg.name + ".csv");
  std::ofstream csv(csv_path);
  if (!csv) {
    err << "error: cannot write '" << csv_path << "'\n";
    return kExitUsage;
  }
  const std::size_t rows = write_csv(csv, traj, rc.every);
  csv.close();

  if (rc.emit_plot) {
    std::filesystem::path gp(csv_path);
    gp.replace_extension(".gp");
    std::ofstream script(gp);
    if (!script) {
      err << "error: cannot write '" << gp.string() << "'\n";
      return kExitUsage;
    }
    write_plot_script(script, traj, cfg, csv_path);
    out << "plot script     " << gp.string() << "\n";
  }

  print_summary(out, cfg, traj, rows, csv_path);
  if (traj.failure) {
    err << "error: " << traj.failure->message << "\n";
    return kExitSingular;
  }
  return kExitOk;
}

inline void print_state(std::ostream& os, const RandomSample& s) {
  os << "    q     = (" << format_number(s.q.c1) << ", " << format_number(s.q.c2) << ", "
     << format_number(s.q.phi) << ", " << format_number(s.q.theta) << ", "
     << format_number(s.q.psi) << ")\n";
  os << "    rates = (" << format_number(s.v.dphi) << ", " << format_number(s.v.dtheta) << ", "
     << format_number(s.v.dpsi) << ")\n";
}

inline int run_validate(const RunConfig& rc, std::ostream& out, std::ostream& err,
                        const ClosedForms& forms = {}) {
  if (rc.samples < 1) {
    err << "error: --samples must be at least 1\n";
    return kExitUsage;
  }
  const ValidationReport rep = validate_sweep(rc.samples, rc.seed, Params::reference(), forms);
  out << "validate        samples=" << rep.samples << " seed=" << rep.seed
      << " generator=mt19937_64\n";
  out << "sampling        c in [-2,2], phi,psi in [-pi,pi], theta in [-1.2,1.2], "
         "rates and accelerations in [-3,3]\n";
  out << std::scientific << std::setprecision(3);
  out << "closed form vs linear solve    max rel err " << rep.max_closed_form_error
      << "  (threshold " << kClosedFormTolerance << ")  "
      << (rep.closed_form_ok() ? "PASS" : "FAIL") << "\n";
  out << "closed form vs FD oracle       max rel err " << rep.max_oracle_error << "  (threshold "
      << kOracleTolerance << ")  " << (rep.oracle_ok() ? "PASS" : "FAIL") << "\n";
  out << std::defaultfloat << std::setprecision(6);
  if (rep.passed()) {
    out << "result          PASS\n";
    return kExitOk;
  }
  out << "result          FAIL\n";
  if (!rep.closed_form_ok()) {
    err << "worst closed-form state:\n";
    print_state(err, rep.worst_closed_form);
  }
  if (!rep.oracle_ok()) {
    err << "worst oracle state:\n";
    print_state(err, rep.worst_oracle);
  }
  return kExitValidation;
}

/// Whole program: parse, dispatch, map errors to exit codes.
inline int run(std::span<const std::string> args, std::ostream& out, std::ostream& err,
               const ClosedForms& forms = {}) {
  RunConfig rc;
  try {
    rc = parse_args(args);
  } catch (const CLI::CallForHelp&) {
    out << usage();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    return rc.mode == Mode::simulate ? run_simulate(rc, out, err) : run_validate(rc, out, err, forms);
  } catch (const SingularConfiguration& e) {
    err << "error: " << e.what() << "\n";
    return kExitSingular;
  }
}

}  // namespace rolling_disk::cli
