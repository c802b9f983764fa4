// Algebraic relative-equilibrium conditions: the lambda triple for Lagrange
// shapes, the equator condition, and the rotating-meridian machinery (A, the
// pairwise bracket condition, spin solving, shape -> configuration).
#pragma once

#include <array>
#include <optional>

#include "s2re/core.hpp"

namespace s2re {

struct LambdaTriple {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

LambdaTriple lambda_triple(const MassTriple& m, const GeneralShape& shape);

/// max pairwise |lambda_i - lambda_j| < tol * (1 + max |lambda_i|).
bool is_lagrange_shape(const MassTriple& m, const GeneralShape& shape, double tol);

/// Diagonal (m2+m3, m3+m1, m1+m2), off-diagonal -sqrt(m_i m_j) cos sigma_ij.
Matrix3 inertia_matrix(const MassTriple& m, const GeneralShape& shape);

/// Differences of m_i m_j sin(dphi_ij)/|sin(dphi_ij)|^3 between the pairs
/// (12)-(23) and (23)-(31), with dphi31 = -(dphi12 + dphi23).
std::array<double, 2> equator_residuals(const MassTriple& m, double dphi12,
                                        double dphi23);

/// A = |sum_l m_l (cos 2theta_l, sin 2theta_l)| for any theta realization of
/// the shape. Equal to sqrt(sum m^2 + 2 sum m_i m_j cos 2tau_k).
double big_a(const MassTriple& m, const MeridianShape& shape);

/// The rotating-meridian bracket condition: with x = s omega^2 / (2A) and
/// P_ij = m_i m_j (x sin 2tau_k - sin tau_k / |sin tau_k|^3), returns
/// (P12 - P23, P23 - P31). Throws AZeroError when A <= kEpsA.
std::array<double, 2> meridian_residuals(const MassTriple& m,
                                         const MeridianShape& shape, int s,
                                         double omega2);

/// max |meridian_residuals| divided by max(1, largest |x G_ij|, |F_ij|), so
/// the value stays meaningful next to singular lines where F_ij blows up.
double meridian_residual_norm(const MassTriple& m, const MeridianShape& shape, int s,
                              double omega2);

struct Spin {
  int s = 1;
  double omega2 = 0.0;
};

/// Solves the bracket condition for x by least squares over its two
/// independent equations. Returns nothing when the system is inconsistent,
/// i.e. the shape is not an Euler shape for these masses.
std::optional<Spin> solve_s_omega2(const MassTriple& m, const MeridianShape& shape);

/// theta_1 from the atan2 branch of the double-angle formula, then
/// theta_2 = theta_1 - tau3 and theta_3 = theta_1 + tau2; all phi = 0.
SphericalConfiguration configuration_from_meridian_shape(const MassTriple& m,
                                                         const MeridianShape& shape,
                                                         int s);

/// cos(2 theta_1) and sin(2 theta_1) as given by the double-angle formula,
/// before atan2. Their squares sum to one exactly when A is the true norm.
std::array<double, 2> double_angle_pair(const MassTriple& m,
                                        const MeridianShape& shape, int s);

/// Solve spin, then build the configuration. Nothing if not an Euler shape.
std::optional<ReSolution> meridian_re_solution(const MassTriple& m,
                                               const MeridianShape& shape);

}  // namespace s2re
