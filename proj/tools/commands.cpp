#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "s2re/azero.hpp"
#include "s2re/continuation.hpp"
#include "s2re/core.hpp"
#include "s2re/dynamics.hpp"
#include "s2re/mass_independent.hpp"
#include "s2re/re_conditions.hpp"

namespace s2re::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string masses;
  std::string out;
  bool json = false;
  std::size_t grid = 400;
  std::string seed_shape;
  double step = 1e-3;
  double dt = 0.0;  // 0: T / kStepsPerPeriod
  double periods = 1.0;
  double tol = 1e-10;
  double tol_g = kTolG;
  std::uint64_t rng_seed = 0;
  bool degrees = false;
  std::string state;
  std::size_t steps = 1000;
  std::size_t sample_every = 10;
  std::size_t max_points = 100000;
};

std::vector<double> parse_list(const std::string& text, std::size_t expected,
                               const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + ": '" + text + "'");
    }
  }
  if (values.size() != expected) {
    throw UsageError(std::string(what) + " needs " + std::to_string(expected) +
                     " comma-separated numbers");
  }
  return values;
}

MassTriple parse_masses(const std::string& text) {
  const auto v = parse_list(text, 3, "--masses");
  try {
    return MassTriple(v[0], v[1], v[2]);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::vector<MassTriple> masses_or_figure_set(const RunConfig& cfg) {
  if (!cfg.masses.empty()) return {parse_masses(cfg.masses)};
  return {MassTriple(0.1, 0.5, 1.0), MassTriple(0.4, 0.5, 1.0), MassTriple(0.8, 0.9, 1.0),
          MassTriple(1.0, 1.0, 1.0)};
}

MassTriple required_masses(const RunConfig& cfg) {
  if (cfg.masses.empty()) throw UsageError("--masses is required");
  return parse_masses(cfg.masses);
}

double angle_in(const RunConfig& cfg, double x) {
  return cfg.degrees ? x * kPi / 180.0 : x;
}

MeridianShape required_shape(const RunConfig& cfg) {
  if (cfg.seed_shape.empty()) throw UsageError("--seed-shape tau1,tau2 is required");
  const auto v = parse_list(cfg.seed_shape, 2, "--seed-shape");
  try {
    return MeridianShape(angle_in(cfg, v[0]), angle_in(cfg, v[1]));
  } catch (const SingularityError& e) {
    throw UsageError(e.what());
  }
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const std::string& c : cells) {
    if (!first) row += ',';
    row += c;
    first = false;
  }
  row += '\n';
  return row;
}

std::string num(double x) { return format_number(x); }

json json_number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

// Fiducial placement for the equal-mass equilateral shape, where any
// rotation of the shape is an equilibrium.
SphericalConfiguration fiducial_equilateral() {
  return SphericalConfiguration::meridian(kPi / 2.0, kPi / 2.0 - 2.0 * kPi / 3.0,
                                          reduce_angle(kPi / 2.0 + 2.0 * kPi / 3.0));
}

std::size_t steps_per_period(const RunConfig& cfg, double omega2) {
  if (cfg.dt <= 0.0) return kStepsPerPeriod;
  const double period = omega2 > 0.0 ? kTwoPi / std::sqrt(omega2) : kTwoPi;
  return static_cast<std::size_t>(std::ceil(period / cfg.dt));
}

struct DriftOutcome {
  std::optional<double> drift;  // max of theta and phi deviations
  bool passed = false;
  double energy_drift = 0.0;
  std::string note;
};

DriftOutcome simulate_drift(const RunConfig& cfg, const MassTriple& m, const ReSolution& sol,
                            double tol) {
  DriftOutcome d;
  try {
    const VerifyResult v = verify_re(m, sol, cfg.periods, tol, steps_per_period(cfg, sol.omega2));
    d.drift = std::max(v.report.max_theta_drift, v.report.max_phi_deviation);
    d.passed = v.passed;
    d.energy_drift = v.report.energy_drift_rel;
  } catch (const TruncatedTrajectory& e) {
    d.note = e.what();
  } catch (const SingularityError& e) {
    d.note = e.what();
  }
  return d;
}

class Output {
 public:
  Output(const RunConfig& cfg, std::ostream& fallback) : stream_(&fallback) {
    if (!cfg.out.empty()) {
      file_.open(cfg.out, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file " + cfg.out);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// --- mass-independent -----------------------------------------------------

int cmd_mass_independent(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MassTriple m = required_masses(cfg);
  Output o(cfg, out);
  json shapes = json::array();
  std::string csv = csv_row({"shape", "tau1", "tau2", "s", "omega2", "A", "theta1", "theta2",
                             "theta3", "residual", "drift", "indefinite"});
  bool ok = true;
  for (IndependentShape which : kIndependentShapes) {
    const MeridianShape shape = independent_shape(which);
    const IndependentSpin spin = spin_for_shape(m, which);
    ReSolution sol;
    sol.s = spin.s;
    sol.omega2 = spin.omega2;
    sol.indefinite = spin.indefinite;
    sol.config = spin.indefinite ? fiducial_equilateral()
                                 : configuration_from_meridian_shape(m, shape, spin.s);
    const double residual = re_residuals(m, sol.config, sol.omega2).max_abs();
    if (!(residual <= cfg.tol)) {
      ok = false;
      err << shape_name(which) << ": residual " << num(residual) << " above tolerance\n";
    }
    const DriftOutcome drift = simulate_drift(cfg, m, sol, 1e-6);
    if (!drift.note.empty()) err << shape_name(which) << ": drift not measured: " << drift.note << '\n';

    const auto& th = sol.config.theta;
    shapes.push_back({{"name", std::string(shape_name(which))},
                      {"tau1", shape.tau1()},
                      {"tau2", shape.tau2()},
                      {"s", sol.s},
                      {"omega2", sol.omega2},
                      {"A", spin.a},
                      {"theta", {th[0], th[1], th[2]}},
                      {"residual", residual},
                      {"drift", drift.drift ? json(*drift.drift) : json(nullptr)},
                      {"indefinite", sol.indefinite}});
    csv += csv_row({std::string(shape_name(which)), num(shape.tau1()), num(shape.tau2()),
                    std::to_string(sol.s), num(sol.omega2), num(spin.a), num(th[0]), num(th[1]),
                    num(th[2]), num(residual), drift.drift ? num(*drift.drift) : "",
                    sol.indefinite ? "1" : "0"});
  }
  if (cfg.json) {
    json doc{{"masses", m.values()}, {"shapes", shapes}};
    o.stream() << doc.dump(2) << '\n';
  } else {
    o.stream() << csv;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// --- grids ------------------------------------------------------------------

// Cell-centred grid over (-pi, pi) x (0, pi); rows run over tau2, columns
// over tau1. Cell centres never fall on a singular line.
template <class Row>
void for_grid(std::size_t n, Row row) {
  const double h1 = kTwoPi / static_cast<double>(n);
  const double h2 = kPi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double tau2 = (static_cast<double>(j) + 0.5) * h2;
    for (std::size_t i = 0; i < n; ++i) {
      row(-kPi + (static_cast<double>(i) + 0.5) * h1, tau2);
    }
  }
}

int cmd_scan_f(const RunConfig& cfg, std::ostream& out) {
  if (cfg.grid < 100) throw UsageError("scan-f needs --grid >= 100");
  Output o(cfg, out);
  std::ostream& s = o.stream();
  s << "tau1,tau2,f1,f2\n";
  for_grid(cfg.grid, [&](double t1, double t2) {
    s << csv_row({num(t1), num(t2), num(f1(t1, t2)), num(f2(t1, t2))});
  });
  return kExitOk;
}

int cmd_scan_g(const RunConfig& cfg, std::ostream& out) {
  if (cfg.grid < 100) throw UsageError("scan-g needs --grid >= 100");
  const MassTriple m = required_masses(cfg);
  Output o(cfg, out);
  std::ostream& s = o.stream();
  s << "tau1,tau2,g,A\n";
  for_grid(cfg.grid, [&](double t1, double t2) {
    s << csv_row({num(t1), num(t2), num(g_eval(m, t1, t2)), num(big_a(m, MeridianShape(t1, t2)))});
  });
  return kExitOk;
}

// --- continuation -----------------------------------------------------------

int cmd_continue(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MassTriple m = required_masses(cfg);
  const MeridianShape seed = required_shape(cfg);
  TraceOptions options;
  options.tol_g = cfg.tol_g;
  ContinuationCurve curve;
  try {
    curve = trace_contour(m, seed, cfg.step, cfg.max_points, options);
  } catch (const CorrectorDivergence& e) {
    err << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  Output o(cfg, out);
  json rows = json::array();
  std::string csv = csv_row({"idx", "tau1", "tau2", "g", "A", "s", "omega2", "residual"});
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const Vec2& p = curve.points[i];
    const MeridianShape shape(p[0], p[1]);
    const double g = g_eval(m, p[0], p[1]);
    const double a = big_a(m, shape);
    std::optional<Spin> spin;
    double residual = NAN;
    if (a > kEpsA) {
      spin = solve_s_omega2(m, shape);
      if (spin) residual = meridian_residual_norm(m, shape, spin->s, spin->omega2);
    }
    csv += csv_row({std::to_string(i), num(p[0]), num(p[1]), num(g), num(a),
                    spin ? std::to_string(spin->s) : "", spin ? num(spin->omega2) : "",
                    spin ? num(residual) : ""});
    rows.push_back({{"idx", i},
                    {"tau1", p[0]},
                    {"tau2", p[1]},
                    {"g", g},
                    {"A", a},
                    {"s", spin ? json(spin->s) : json(nullptr)},
                    {"omega2", spin ? json(spin->omega2) : json(nullptr)},
                    {"residual", json_number(residual)}});
  }
  if (cfg.json) {
    json doc{{"masses", m.values()},
             {"step", curve.step},
             {"termination", termination_name(curve.termination)},
             {"termination_backward", termination_name(curve.termination_backward)},
             {"a_zero_crossings", curve.a_zero_crossings},
             {"points", rows}};
    o.stream() << doc.dump(2) << '\n';
  } else {
    o.stream() << csv;
  }
  err << "termination: " << termination_name(curve.termination) << " / "
      << termination_name(curve.termination_backward) << ", " << curve.points.size()
      << " points\n";
  return kExitOk;
}

// --- configurations -----------------------------------------------------------

int cmd_configs(const RunConfig& cfg, std::ostream& out) {
  Output o(cfg, out);
  json rows = json::array();
  std::string csv = csv_row({"m1", "m2", "m3", "shape", "tau1", "tau2", "s", "omega2", "A",
                             "theta1", "theta2", "theta3", "normalization", "indefinite"});
  for (const MassTriple& m : masses_or_figure_set(cfg)) {
    for (IndependentShape which : kIndependentShapes) {
      const MeridianShape shape = independent_shape(which);
      const IndependentSpin spin = spin_for_shape(m, which);
      SphericalConfiguration config;
      std::optional<double> norm;
      if (spin.indefinite) {
        config = fiducial_equilateral();
      } else {
        const auto [c, s] = double_angle_pair(m, shape, spin.s);
        norm = c * c + s * s;
        config = configuration_from_meridian_shape(m, shape, spin.s);
      }
      const auto& th = config.theta;
      csv += csv_row({num(m.m1()), num(m.m2()), num(m.m3()), std::string(shape_name(which)),
                      num(shape.tau1()), num(shape.tau2()), std::to_string(spin.s),
                      num(spin.omega2), num(spin.a), num(th[0]), num(th[1]), num(th[2]),
                      norm ? num(*norm) : "", spin.indefinite ? "1" : "0"});
      rows.push_back({{"masses", m.values()},
                      {"shape", std::string(shape_name(which))},
                      {"tau1", shape.tau1()},
                      {"tau2", shape.tau2()},
                      {"s", spin.s},
                      {"omega2", spin.omega2},
                      {"A", spin.a},
                      {"theta", {th[0], th[1], th[2]}},
                      {"normalization", norm ? json(*norm) : json(nullptr)},
                      {"indefinite", spin.indefinite}});
    }
  }
  if (cfg.json) {
    o.stream() << json{{"configurations", rows}}.dump(2) << '\n';
  } else {
    o.stream() << csv;
  }
  return kExitOk;
}

// --- A = 0 set ----------------------------------------------------------------

int cmd_azero(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MassTriple m = required_masses(cfg);
  const AZeroSolutionSet set = azero_solutions(m);
  if (set.degenerate) err << "masses on the triangle equality: no A = 0 shape\n";
  Output o(cfg, out);
  json rows = json::array();
  std::string csv = csv_row({"idx", "tau1", "tau2", "A"});
  bool ok = true;
  for (std::size_t i = 0; i < set.solutions.size(); ++i) {
    const MeridianShape& z = set.solutions[i];
    const double a = big_a(m, z);
    ok = ok && a < 1e-12;
    csv += csv_row({std::to_string(i), num(z.tau1()), num(z.tau2()), num(a)});
    rows.push_back({{"tau1", z.tau1()}, {"tau2", z.tau2()}, {"A", a}});
  }
  if (cfg.json) {
    json doc{{"masses", m.values()},
             {"triangle_inequality", triangle_inequality(m)},
             {"degenerate", set.degenerate},
             {"solutions", rows}};
    if (!set.solutions.empty()) {
      doc["alpha1"] = set.alpha1;
      doc["alpha2"] = set.alpha2;
    }
    o.stream() << doc.dump(2) << '\n';
  } else {
    o.stream() << csv;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// --- verification pipeline ------------------------------------------------

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MassTriple m = required_masses(cfg);
  const MeridianShape shape = required_shape(cfg);
  Output o(cfg, out);
  json doc{{"masses", m.values()}, {"tau1", shape.tau1()}, {"tau2", shape.tau2()}};
  const double a = big_a(m, shape);
  doc["A"] = a;
  auto finish = [&](bool passed) {
    doc["passed"] = passed;
    if (cfg.json) {
      o.stream() << doc.dump(2) << '\n';
    } else {
      for (const auto& [key, value] : doc.items()) {
        o.stream() << key << ": ";
        if (value.is_number_float()) {
          o.stream() << num(value.get<double>());
        } else {
          o.stream() << value.dump();
        }
        o.stream() << '\n';
      }
    }
    return passed ? kExitOk : kExitCheckFailed;
  };
  if (!(a > kEpsA)) {
    err << "A = 0 at this shape; see the azero command\n";
    doc["stage"] = "spin";
    return finish(false);
  }
  const std::optional<Spin> spin = solve_s_omega2(m, shape);
  if (!spin) {
    err << "no (s, omega^2) satisfies both meridian conditions\n";
    doc["stage"] = "spin";
    return finish(false);
  }
  ReSolution sol;
  sol.s = spin->s;
  sol.omega2 = spin->omega2;
  sol.config = configuration_from_meridian_shape(m, shape, spin->s);
  doc["s"] = sol.s;
  doc["omega2"] = sol.omega2;
  doc["theta"] = sol.config.theta;
  const double meridian = meridian_residual_norm(m, shape, sol.s, sol.omega2);
  const double full = re_residuals(m, sol.config, sol.omega2).max_abs();
  doc["meridian_residual"] = meridian;
  doc["eom_residual"] = full;
  const DriftOutcome drift = simulate_drift(cfg, m, sol, 1e-6);
  doc["drift"] = drift.drift ? json(*drift.drift) : json(nullptr);
  doc["energy_drift"] = drift.energy_drift;
  if (!drift.note.empty()) doc["note"] = drift.note;
  doc["stage"] = "done";
  const double tol = std::max(cfg.tol, 1e-8);
  const bool passed = meridian <= tol && full <= tol && drift.drift.has_value() && drift.passed;
  return finish(passed);
}

// --- free simulation ----------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const MassTriple m = required_masses(cfg);
  DynState state;
  if (!cfg.state.empty()) {
    const auto v = parse_list(cfg.state, 12, "--state");
    for (std::size_t i = 0; i < 3; ++i) {
      state.theta[i] = angle_in(cfg, v[i]);
      state.phi[i] = angle_in(cfg, v[3 + i]);
      state.theta_dot[i] = v[6 + i];
      state.phi_dot[i] = v[9 + i];
    }
  } else if (!cfg.seed_shape.empty()) {
    const auto sol = meridian_re_solution(m, required_shape(cfg));
    if (!sol) {
      err << "seed shape is not a relative equilibrium for these masses\n";
      return kExitCheckFailed;
    }
    state.theta = sol->config.theta;
    state.phi = sol->config.phi;
    state.phi_dot.fill(std::sqrt(sol->omega2));
  } else {
    throw UsageError("simulate needs --state or --seed-shape");
  }
  const double dt = cfg.dt > 0.0 ? cfg.dt : 1e-3;
  IntegrateOptions options;
  options.sample_every = std::max<std::size_t>(cfg.sample_every, 1);
  TrajectoryReport report;
  int code = kExitOk;
  try {
    report = integrate(m, state, dt, cfg.steps, options);
  } catch (const TruncatedTrajectory& e) {
    err << e.what() << '\n';
    report = e.partial();
    code = kExitCheckFailed;
  } catch (const SingularityError& e) {
    err << e.what() << '\n';
    return kExitCheckFailed;
  }
  Output o(cfg, out);
  if (cfg.json) {
    json rows = json::array();
    for (const TrajectorySample& s : report.samples) {
      rows.push_back({{"t", s.t},
                      {"theta", s.state.theta},
                      {"phi", s.state.phi},
                      {"E", s.energy},
                      {"Lz", s.lz}});
    }
    json doc{{"masses", m.values()},
             {"dt", dt},
             {"steps_completed", report.steps_completed},
             {"energy_drift_rel", report.energy_drift_rel},
             {"lz_drift_rel", report.lz_drift_rel},
             {"samples", rows}};
    o.stream() << doc.dump(2) << '\n';
  } else {
    std::ostream& s = o.stream();
    s << "t,theta1,theta2,theta3,phi1,phi2,phi3,E,Lz\n";
    for (const TrajectorySample& r : report.samples) {
      const auto& th = r.state.theta;
      const auto& ph = r.state.phi;
      s << csv_row({num(r.t), num(th[0]), num(th[1]), num(th[2]), num(ph[0]), num(ph[1]),
                    num(ph[2]), num(r.energy), num(r.lz)});
    }
  }
  return code;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--masses", cfg.masses, "masses m1,m2,m3");
  sub->add_option("--out", cfg.out, "output file (default: stdout)");
  sub->add_flag("--json", cfg.json, "write JSON instead of CSV");
  sub->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--rng-seed", cfg.rng_seed, "random seed");
  sub->add_flag("--degrees", cfg.degrees, "angles on input are in degrees");
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Relative equilibria of three bodies on a sphere"};
  app.require_subcommand(1);

  auto* mi = app.add_subcommand("mass-independent", "the four mass-independent shapes");
  add_common(mi, cfg);
  mi->add_option("--periods", cfg.periods, "rotation periods to simulate")
      ->check(CLI::PositiveNumber);
  mi->add_option("--dt", cfg.dt, "time step (default: period / 20000)")
      ->check(CLI::PositiveNumber);

  auto* sf = app.add_subcommand("scan-f", "grid of f1, f2 over the shape space");
  add_common(sf, cfg);
  sf->add_option("--grid", cfg.grid, "grid points per axis");

  auto* sg = app.add_subcommand("scan-g", "grid of g and A over the shape space");
  add_common(sg, cfg);
  sg->add_option("--grid", cfg.grid, "grid points per axis");

  auto* co = app.add_subcommand("continue", "trace g = 0 through a seed shape");
  add_common(co, cfg);
  co->add_option("--seed-shape", cfg.seed_shape, "seed tau1,tau2");
  co->add_option("--step", cfg.step, "arclength step in [1e-4, 1e-1]");
  co->add_option("--tol-g", cfg.tol_g, "corrector tolerance on |g|/(m1+m2+m3)")
      ->check(CLI::PositiveNumber);
  co->add_option("--max-points", cfg.max_points, "points per direction");

  auto* cf = app.add_subcommand("configs", "configurations of the mass-independent shapes");
  add_common(cf, cfg);

  auto* az = app.add_subcommand("azero", "shapes with A = 0");
  add_common(az, cfg);

  auto* ve = app.add_subcommand("verify", "spin, configuration, residuals and simulation");
  add_common(ve, cfg);
  ve->add_option("--seed-shape", cfg.seed_shape, "shape tau1,tau2");
  ve->add_option("--periods", cfg.periods, "rotation periods to simulate")
      ->check(CLI::PositiveNumber);
  ve->add_option("--dt", cfg.dt, "time step (default: period / 20000)")
      ->check(CLI::PositiveNumber);

  auto* si = app.add_subcommand("simulate", "integrate the equations of motion");
  add_common(si, cfg);
  si->add_option("--state", cfg.state,
                 "theta1..3,phi1..3,theta_dot1..3,phi_dot1..3");
  si->add_option("--seed-shape", cfg.seed_shape, "start from the RE of this shape");
  si->add_option("--dt", cfg.dt, "time step (default 1e-3)")->check(CLI::PositiveNumber);
  si->add_option("--steps", cfg.steps, "number of steps");
  si->add_option("--sample-every", cfg.sample_every, "steps between samples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (mi->parsed()) return cmd_mass_independent(cfg, out, err);
    if (sf->parsed()) return cmd_scan_f(cfg, out);
    if (sg->parsed()) return cmd_scan_g(cfg, out);
    if (co->parsed()) return cmd_continue(cfg, out, err);
    if (cf->parsed()) return cmd_configs(cfg, out);
    if (az->parsed()) return cmd_azero(cfg, out, err);
    if (ve->parsed()) return cmd_verify(cfg, out, err);
    if (si->parsed()) return cmd_simulate(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace s2re::cli
