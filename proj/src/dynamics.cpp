#include "s2re/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace s2re {

namespace {

constexpr std::array<std::array<std::size_t, 2>, 3> kPairs{{{0, 1}, {1, 2}, {2, 0}}};

void require_nonsingular(const SphericalConfiguration& config, const char* who) {
  if (!config.is_nonsingular()) {
    throw SingularityError(std::string(who) + ": coincident or antipodal pair");
  }
}

// m_i m_j sin(theta_i) sin(theta_j) sin(phi_i - phi_j) / sin^3(sigma_ij);
// antisymmetric in (i, j) and equal to the pair's share of dV/dphi_i.
double azimuthal_pair_term(const MassTriple& m, const SphericalConfiguration& c,
                           std::size_t i, std::size_t j) {
  const double s = c.sin_sigma(i, j);
  return m[i] * m[j] * std::sin(c.theta[i]) * std::sin(c.theta[j]) *
         std::sin(c.phi[i] - c.phi[j]) / (s * s * s);
}

DynState advance(const DynState& s, const StateDerivative& d, double h) {
  DynState out = s;
  for (std::size_t i = 0; i < 3; ++i) {
    out.theta[i] += h * d.theta_dot[i];
    out.phi[i] += h * d.phi_dot[i];
    out.theta_dot[i] += h * d.theta_ddot[i];
    out.phi_dot[i] += h * d.phi_ddot[i];
  }
  return out;
}

bool finite_state(const DynState& s) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(s.theta[i]) || !std::isfinite(s.phi[i]) ||
        !std::isfinite(s.theta_dot[i]) || !std::isfinite(s.phi_dot[i])) {
      return false;
    }
  }
  return true;
}

const char* singularity_reason(const DynState& s, double pole_guard) {
  if (!finite_state(s)) return "non-finite state";
  if (!s.configuration().is_nonsingular()) return "collision or antipodal pair";
  for (double th : s.theta) {
    if (std::abs(std::sin(th)) < pole_guard) return "body at a pole";
  }
  return nullptr;
}

}  // namespace

double cotangent_potential(const MassTriple& m,
                           const SphericalConfiguration& config) {
  require_nonsingular(config, "cotangent_potential");
  double v = 0.0;
  for (const auto& [i, j] : kPairs) {
    v -= m[i] * m[j] * config.cos_sigma(i, j) / config.sin_sigma(i, j);
  }
  return v;
}

PotentialGradient potential_gradient(const MassTriple& m,
                                     const SphericalConfiguration& c) {
  require_nonsingular(c, "potential_gradient");
  PotentialGradient g;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double s = c.sin_sigma(i, j);
      const double s3 = s * s * s;
      const double radial = std::sin(c.theta[i]) * std::cos(c.theta[j]) -
                            std::cos(c.theta[i]) * std::sin(c.theta[j]) *
                                std::cos(c.phi[i] - c.phi[j]);
      g.dtheta[i] += m[i] * m[j] * radial / s3;
      g.dphi[i] += azimuthal_pair_term(m, c, i, j);
    }
  }
  return g;
}

StateDerivative eom_rhs(const MassTriple& m, const DynState& state) {
  const PotentialGradient grad = potential_gradient(m, state.configuration());
  StateDerivative d;
  for (std::size_t i = 0; i < 3; ++i) {
    const double st = std::sin(state.theta[i]);
    const double ct = std::cos(state.theta[i]);
    d.theta_dot[i] = state.theta_dot[i];
    d.phi_dot[i] = state.phi_dot[i];
    d.theta_ddot[i] =
        st * ct * state.phi_dot[i] * state.phi_dot[i] - grad.dtheta[i] / m[i];
    if (std::abs(st) < kEpsSing) {
      if (state.phi_dot[i] != 0.0 || grad.dphi[i] != 0.0) {
        throw SingularityError("eom_rhs: body at a pole with nonzero azimuthal motion");
      }
      d.phi_ddot[i] = 0.0;
      continue;
    }
    d.phi_ddot[i] =
        (-grad.dphi[i] - 2.0 * m[i] * st * ct * state.theta_dot[i] * state.phi_dot[i]) /
        (m[i] * st * st);
  }
  return d;
}

double kinetic_energy(const MassTriple& m, const DynState& s) {
  double k = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double st = std::sin(s.theta[i]);
    k += 0.5 * m[i] *
         (s.theta_dot[i] * s.theta_dot[i] + st * st * s.phi_dot[i] * s.phi_dot[i]);
  }
  return k;
}

double total_energy(const MassTriple& m, const DynState& s) {
  return kinetic_energy(m, s) + cotangent_potential(m, s.configuration());
}

double polar_angular_momentum(const MassTriple& m, const DynState& s) {
  double lz = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double st = std::sin(s.theta[i]);
    lz += m[i] * st * st * s.phi_dot[i];
  }
  return lz;
}

DynState rk4_step(const MassTriple& m, const DynState& s, double dt) {
  const StateDerivative k1 = eom_rhs(m, s);
  const StateDerivative k2 = eom_rhs(m, advance(s, k1, 0.5 * dt));
  const StateDerivative k3 = eom_rhs(m, advance(s, k2, 0.5 * dt));
  const StateDerivative k4 = eom_rhs(m, advance(s, k3, dt));
  DynState out = s;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < 3; ++i) {
    out.theta[i] += w * (k1.theta_dot[i] + 2.0 * k2.theta_dot[i] +
                         2.0 * k3.theta_dot[i] + k4.theta_dot[i]);
    out.phi[i] += w * (k1.phi_dot[i] + 2.0 * k2.phi_dot[i] +
                       2.0 * k3.phi_dot[i] + k4.phi_dot[i]);
    out.theta_dot[i] += w * (k1.theta_ddot[i] + 2.0 * k2.theta_ddot[i] +
                             2.0 * k3.theta_ddot[i] + k4.theta_ddot[i]);
    out.phi_dot[i] += w * (k1.phi_ddot[i] + 2.0 * k2.phi_ddot[i] +
                           2.0 * k3.phi_ddot[i] + k4.phi_ddot[i]);
  }
  return out;
}

TrajectoryReport integrate(const MassTriple& m, const DynState& state0,
                           double dt, std::size_t steps,
                           const IntegrateOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("integrate: dt must be positive");
  }
  if (const char* why = singularity_reason(state0, options.pole_guard)) {
    throw SingularityError(std::string("integrate: initial state singular: ") + why);
  }

  TrajectoryReport report;
  const double e0 = total_energy(m, state0);
  const double lz0 = polar_angular_momentum(m, state0);
  const double e_scale = e0 != 0.0 ? std::abs(e0) : 1.0;
  double lz_scale = std::abs(lz0);
  if (lz_scale == 0.0) {
    for (std::size_t i = 0; i < 3; ++i) {
      const double st = std::sin(state0.theta[i]);
      lz_scale += m[i] * st * st * std::abs(state0.phi_dot[i]);
    }
  }
  if (lz_scale == 0.0) lz_scale = 1.0;

  auto record = [&](double t, const DynState& s, double e, double lz) {
    report.samples.push_back({t, s, e, lz});
  };
  record(0.0, state0, e0, lz0);

  DynState s = state0;
  for (std::size_t n = 1; n <= steps; ++n) {
    DynState next;
    try {
      next = rk4_step(m, s, dt);
    } catch (const SingularityError& err) {
      throw TruncatedTrajectory(err.what(), std::move(report));
    }
    if (const char* why = singularity_reason(next, options.pole_guard)) {
      throw TruncatedTrajectory(std::string("integrate: ") + why, std::move(report));
    }
    s = next;
    const double t = static_cast<double>(n) * dt;
    const double e = total_energy(m, s);
    const double lz = polar_angular_momentum(m, s);
    for (std::size_t i = 0; i < 3; ++i) {
      report.max_theta_drift =
          std::max(report.max_theta_drift, std::abs(s.theta[i] - state0.theta[i]));
      report.max_phi_deviation =
          std::max(report.max_phi_deviation,
                   std::abs(s.phi[i] - state0.phi[i] - options.reference_omega * t));
    }
    report.energy_drift_rel = std::max(report.energy_drift_rel, std::abs(e - e0) / e_scale);
    report.lz_drift_rel = std::max(report.lz_drift_rel, std::abs(lz - lz0) / lz_scale);
    report.steps_completed = n;
    const bool sample = options.sample_every > 0 && n % options.sample_every == 0;
    if (sample || n == steps) {
      record(t, s, e, lz);
    }
  }
  return report;
}

VerifyResult verify_re(const MassTriple& m, const ReSolution& sol,
                       double periods, double tol, std::size_t steps_per_period) {
  if (!(sol.omega2 >= 0.0) || !std::isfinite(sol.omega2)) {
    throw std::invalid_argument("verify_re: omega2 must be finite and nonnegative");
  }
  if (!(periods > 0.0) || steps_per_period == 0) {
    throw std::invalid_argument("verify_re: periods and steps must be positive");
  }
  VerifyResult out;
  out.omega = std::sqrt(sol.omega2);
  const double period = out.omega > 0.0 ? kTwoPi / out.omega : kTwoPi;
  const auto steps = static_cast<std::size_t>(
      std::llround(periods * static_cast<double>(steps_per_period)));
  out.t_end = periods * period;
  out.dt = out.t_end / static_cast<double>(steps);

  DynState s0;
  s0.theta = sol.config.theta;
  s0.phi = sol.config.phi;
  s0.phi_dot = {out.omega, out.omega, out.omega};

  IntegrateOptions opts;
  opts.reference_omega = out.omega;
  opts.sample_every = std::max<std::size_t>(1, steps_per_period / 20);
  out.report = integrate(m, s0, out.dt, steps, opts);
  out.passed = out.report.max_theta_drift < tol && out.report.max_phi_deviation < tol;
  return out;
}

double ReResiduals::max_abs() const {
  double r = 0.0;
  for (double x : radial) r = std::max(r, std::abs(x));
  for (double x : azimuthal) r = std::max(r, std::abs(x));
  return r;
}

ReResiduals re_residuals(const MassTriple& m, const SphericalConfiguration& c,
                         double omega2) {
  const PotentialGradient grad = potential_gradient(m, c);
  ReResiduals r;
  for (std::size_t i = 0; i < 3; ++i) {
    r.radial[i] = omega2 * m[i] * std::sin(c.theta[i]) * std::cos(c.theta[i]) -
                  grad.dtheta[i];
  }
  const double e12 = azimuthal_pair_term(m, c, 0, 1);
  const double e23 = azimuthal_pair_term(m, c, 1, 2);
  const double e31 = azimuthal_pair_term(m, c, 2, 0);
  r.azimuthal = {e12 - e23, e23 - e31};
  return r;
}

}  // namespace s2re
