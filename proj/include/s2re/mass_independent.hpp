// The mass-independent Euler shapes on a rotating meridian, their spins, the
// f1/f2 curve fields, a brute-force uniqueness scan and the two-body /
// restricted three-body limits.
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "s2re/core.hpp"
#include "s2re/re_conditions.hpp"

namespace s2re {

/// cos(tau1)|sin(tau1)|^3 - cos(tau2)|sin(tau2)|^3. Globally defined.
double f1(double tau1, double tau2);
/// cos(tau1)|sin(tau1)|^3 - cos(tau1+tau2)|sin(tau1+tau2)|^3.
double f2(double tau1, double tau2);
/// d/dtau of cos(tau)|sin(tau)|^3, equal to |sin tau| sin 3tau.
double curve_term_derivative(double tau);

/// tau0 = arccos((sqrt2 - 1)/2) / 2, the equal arc of the isosceles shape.
double isosceles_arc();

/// s omega^2 / A = 1/(cos tau |sin tau|^3) at the equilateral and isosceles
/// shapes (magnitudes).
inline constexpr double kEquilateralSpinFactor = 16.0 / (3.0 * std::numbers::sqrt3);
double isosceles_spin_factor();  // 16/sqrt(16 sqrt2 - 13)

enum class IndependentShape { equilateral, isosceles_center3, isosceles_center1, isosceles_center2 };

inline constexpr std::array<IndependentShape, 4> kIndependentShapes{
    IndependentShape::equilateral, IndependentShape::isosceles_center3,
    IndependentShape::isosceles_center1, IndependentShape::isosceles_center2};

std::string_view shape_name(IndependentShape which);

struct IndependentShapeSet {
  MeridianShape equilateral;        // (2pi/3, 2pi/3)
  MeridianShape isosceles_center3;  // (tau0, tau0)
  MeridianShape isosceles_center1;  // (-2tau0, tau0)
  MeridianShape isosceles_center2;  // (-tau0, 2tau0)
  double tau0;

  const MeridianShape& get(IndependentShape which) const;
};

IndependentShapeSet mass_independent_shapes();
MeridianShape independent_shape(IndependentShape which);

struct IndependentSpin {
  int s = 1;
  double omega2 = 0.0;
  double a = 0.0;
  /// Equal-mass equilateral: A = 0, omega = 0, any placement is an RE.
  bool indefinite = false;
};

IndependentSpin spin_for_shape(const MassTriple& m, IndependentShape which);

/// Closed-form A^2 for the isosceles shape whose middle body is `center`
/// (1, 2 or 3).
double isosceles_a2(const MassTriple& m, int center);

struct ShapeCluster {
  double tau1 = 0.0;
  double tau2 = 0.0;
  std::size_t hits = 0;
  /// max(|f1|, |f2|) after polishing.
  double residual = 0.0;
};

struct BruteForceResult {
  std::vector<ShapeCluster> clusters;
  std::size_t grid_hits = 0;
  std::size_t raw_clusters = 0;
  /// Clusters whose polish ran onto a singular line or corner.
  std::size_t rejected = 0;
};

/// Grid scan of U_phys for |f1| < tol and |f2| < tol, connected-component
/// clustering (hits within two cells merge), Newton polish of every cluster,
/// and removal of clusters that polish onto singular lines or onto a
/// solution already found.
BruteForceResult region_bruteforce(std::size_t grid_n, double tol);

class NoRelativeEquilibrium : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two-body relative equilibrium on a meridian with separation delta in
/// (0, pi). Throws NoRelativeEquilibrium at delta = pi/2.
Spin two_body_spin(double m1, double m2, double delta);

/// Residual of the massless third body's condition:
/// m2 (x sin 2(th2-th3) - 1/f(th2-th3)) - m1 (x sin 2(th3-th1) - 1/f(th3-th1)),
/// x = s omega^2 / (2 A2).
double restricted_residual(double m1, double m2, double theta1, double theta2,
                           int s, double omega2, double theta3);

/// All roots theta3 in (-pi, pi] of restricted_residual, by dense sampling
/// and bisection, excluding collisions and antipodes with the primaries.
std::vector<double> restricted_third_positions(double m1, double m2, double theta1,
                                               double theta2, int s, double omega2);

}  // namespace s2re
