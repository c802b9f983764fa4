// Lagrangian dynamics of three bodies on the unit sphere under the cotangent
// potential, integrated with fixed-step classical RK4. Used as the arbiter of
// every algebraic relative-equilibrium claim.
#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "s2re/core.hpp"

namespace s2re {

struct DynState {
  std::array<double, 3> theta{};
  std::array<double, 3> phi{};
  std::array<double, 3> theta_dot{};
  std::array<double, 3> phi_dot{};

  SphericalConfiguration configuration() const { return {theta, phi}; }
};

/// Time derivative of a DynState: (theta_dot, phi_dot, theta_ddot, phi_ddot).
struct StateDerivative {
  std::array<double, 3> theta_dot{};
  std::array<double, 3> phi_dot{};
  std::array<double, 3> theta_ddot{};
  std::array<double, 3> phi_ddot{};
};

/// Partial derivatives of the potential with respect to theta_i and phi_i.
struct PotentialGradient {
  std::array<double, 3> dtheta{};
  std::array<double, 3> dphi{};
};

struct TrajectorySample {
  double t = 0.0;
  DynState state;
  double energy = 0.0;
  double lz = 0.0;
};

struct TrajectoryReport {
  double max_theta_drift = 0.0;
  /// max over i,t of |phi_i(t) - phi_i(0) - omega_ref * t|.
  double max_phi_deviation = 0.0;
  double energy_drift_rel = 0.0;
  double lz_drift_rel = 0.0;
  std::size_t steps_completed = 0;
  std::vector<TrajectorySample> samples;
};

/// Raised when the trajectory meets a collision, an antipodal pair or a pole
/// (coordinate singularity). Carries the report up to the last good step.
class TruncatedTrajectory : public std::runtime_error {
 public:
  TruncatedTrajectory(const std::string& what, TrajectoryReport partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const TrajectoryReport& partial() const { return partial_; }

 private:
  TrajectoryReport partial_;
};

struct IntegrateOptions {
  /// Record a sample every this many steps; 0 records only the endpoints.
  std::size_t sample_every = 0;
  /// Reference angular speed for max_phi_deviation.
  double reference_omega = 0.0;
  /// Abort when |sin theta_i| falls below this value.
  double pole_guard = 1e-6;
};

double cotangent_potential(const MassTriple& m,
                           const SphericalConfiguration& config);

PotentialGradient potential_gradient(const MassTriple& m,
                                     const SphericalConfiguration& config);

StateDerivative eom_rhs(const MassTriple& m, const DynState& state);

double kinetic_energy(const MassTriple& m, const DynState& state);
double total_energy(const MassTriple& m, const DynState& state);
/// Polar component of angular momentum, sum m_i sin^2(theta_i) phi_dot_i.
double polar_angular_momentum(const MassTriple& m, const DynState& state);

DynState rk4_step(const MassTriple& m, const DynState& state, double dt);

TrajectoryReport integrate(const MassTriple& m, const DynState& state0,
                           double dt, std::size_t steps,
                           const IntegrateOptions& options = {});

struct VerifyResult {
  TrajectoryReport report;
  bool passed = false;
  double omega = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
};

inline constexpr std::size_t kStepsPerPeriod = 20000;

/// Integrates (theta from sol, theta_dot = 0, phi_dot = omega) for `periods`
/// rotation periods. When omega2 = 0 the time span is `periods` * 2pi.
VerifyResult verify_re(const MassTriple& m, const ReSolution& sol,
                       double periods, double tol,
                       std::size_t steps_per_period = kStepsPerPeriod);

struct ReResiduals {
  /// One per body: omega^2 m_i sin cos - (force along theta).
  std::array<double, 3> radial{};
  /// Two independent differences of the three azimuthal pair expressions.
  std::array<double, 2> azimuthal{};

  double max_abs() const;
};

ReResiduals re_residuals(const MassTriple& m,
                         const SphericalConfiguration& config, double omega2);

}  // namespace s2re
