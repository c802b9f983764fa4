// Euler shapes on a rotating meridian as the zero set of g (with A != 0):
// g, the determinant d, gradients, the saddle at the equilateral shape, the
// equal-mass factorization and predictor-corrector tracing of g = 0.
#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "s2re/core.hpp"

namespace s2re {

using Vec2 = std::array<double, 2>;
using Matrix2 = std::array<std::array<double, 2>, 2>;

/// sin(x)|sin(x)|
double f_signed(double x);

/// Cyclic three-term g; linear in the masses. Defined for all finite arcs.
double g_eval(const MassTriple& m, double tau1, double tau2);
double g_eval(const MassTriple& m, const MeridianShape& shape);

/// Sum of the magnitudes of the six products in g, used to normalize it.
double g_term_scale(const MassTriple& m, double tau1, double tau2);

/// det [[G12-G23, G31-G12], [F12-F23, F31-F12]] with F_ij = m_i m_j / f(tau_k)
/// and G_ij = m_i m_j sin 2tau_k.
double d_eval(const MassTriple& m, const MeridianShape& shape);

/// Analytic (dg/dtau1, dg/dtau2), with tau3 = -(tau1 + tau2).
Vec2 g_grad(const MassTriple& m, double tau1, double tau2);
Vec2 g_grad(const MassTriple& m, const MeridianShape& shape);

struct EquilateralHessian {
  /// (9 sqrt3 / 4) [[m3 - m1, m2 - m1], [m2 - m1, m2 - m3]]
  Matrix2 closed_form{};
  /// Central differences of g_grad at (2pi/3, 2pi/3); not symmetrized.
  Matrix2 finite_difference{};
  double det_closed_form = 0.0;
  double det_finite_difference = 0.0;
};

EquilateralHessian hessian_equilateral(const MassTriple& m, double fd_step = 1e-5);

/// (m/2)(3 - cos 2tau1 - cos 2tau2 - cos 2(tau1+tau2))
///   * sin(tau1 - tau2) sin(2tau1 + tau2) sin(tau1 + 2tau2),
/// the factorization of g for three equal masses m in the region
/// sin tau1 > 0, sin tau2 > 0, sin(tau1 + tau2) < 0.
double equal_mass_g(double m, const MeridianShape& shape);

class DegenerateSaddle : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Tangent directions of the two g = 0 branches crossing at the equilateral
/// shape, from the null cone of the closed-form Hessian. Throws
/// DegenerateSaddle for equal masses, where three straight branches meet.
std::array<Vec2, 2> branch_directions_at_saddle(const MassTriple& m);

/// The three straight g = 0 lines through (2pi/3, 2pi/3) for equal masses:
/// tau1 = tau2, 2tau1 + tau2 = 2pi, tau1 + 2tau2 = 2pi (unit directions).
std::array<Vec2, 3> equal_mass_branch_directions();

enum class Termination { boundary, singular, a_zero, max_points, closed_loop, corrector_failure };

const char* termination_name(Termination t);

struct ContinuationCurve {
  std::vector<Vec2> points;
  double step = 0.0;
  /// Reason the forward sweep stopped, and the backward sweep (when the
  /// curve is not closed).
  Termination termination = Termination::max_points;
  Termination termination_backward = Termination::max_points;
  /// Indices of points next to which the curve crosses an A = 0 shape.
  std::vector<std::size_t> a_zero_crossings;
};

class CorrectorDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceOptions {
  double tol_g = kTolG;
  int max_newton = 8;
  double min_step = 1e-5;
  /// Steps whose chord would stray further than this from the curve are
  /// halved (down to min_step).
  double max_chord_error = 1e-7;
  bool both_directions = true;
};

/// Pseudo-arclength predictor-corrector polyline of g = 0 through the
/// corrected seed. Sweeps forward, then backward unless the curve closes.
ContinuationCurve trace_contour(const MassTriple& m, const MeridianShape& seed,
                                double step, std::size_t max_points,
                                const TraceOptions& options = {});

/// The g = 0 branch through the equilateral shape with the given tangent
/// (see branch_directions_at_saddle), traced out from the saddle point both
/// ways. The polyline contains the saddle point itself.
ContinuationCurve trace_saddle_branch(const MassTriple& m, const Vec2& direction, double step,
                                      std::size_t max_points, const TraceOptions& options = {});

/// Newton projection of a point onto g = 0 along the gradient.
/// Returns false if it does not reach tol_g within max_newton iterations.
bool correct_onto_contour(const MassTriple& m, Vec2& point, double tol_g,
                          int max_newton);

/// |g| < tol * g_term_scale and A > kEpsA.
bool is_euler_meridian_shape(const MassTriple& m, const MeridianShape& shape, double tol);

/// Shortest distance from p to the polyline.
double distance_to_polyline(const std::vector<Vec2>& points, const Vec2& p);

}  // namespace s2re
