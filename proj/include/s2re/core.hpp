// Shared domain types for relative equilibria of three bodies on the unit
// sphere: masses, meridian shapes, mutual-arc shapes and configurations.
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace s2re {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Exclusion radius around zeros of sin(.) when testing shape-space
/// membership.
inline constexpr double kEpsSing = 1e-9;
/// Threshold below which A is treated as zero.
inline constexpr double kEpsA = 1e-10;
/// Corrector tolerance on |g| / (m1 + m2 + m3) for continuation.
inline constexpr double kTolG = 1e-12;

/// Raised when two bodies coincide or are antipodal, or a shape leaves the
/// non-singular shape space.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when A vanishes and the shape-to-configuration map is not unique.
class AZeroError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Reduce an angle into (-pi, pi]. Throws std::domain_error on non-finite
/// input.
double reduce_angle(double x);

class MassTriple {
 public:
  MassTriple(double m1, double m2, double m3);

  double m1() const { return m_[0]; }
  double m2() const { return m_[1]; }
  double m3() const { return m_[2]; }
  /// Zero-based access: operator[](0) is m1.
  double operator[](std::size_t i) const { return m_[i]; }
  const std::array<double, 3>& values() const { return m_; }

  double total() const { return m_[0] + m_[1] + m_[2]; }

 private:
  std::array<double, 3> m_;
};

bool in_uphys(double tau1, double tau2);

/// A shape on a rotating meridian, tau_k = theta_i - theta_j for
/// (i,j,k) in {(1,2,3), (2,3,1), (3,1,2)}.
///
/// Construction reduces both arcs into (-pi, pi] and, when tau2 < 0, rotates
/// the meridian by pi about the polar axis, which negates every tau. The
/// result must lie in U_phys.
class MeridianShape {
 public:
  MeridianShape(double tau1, double tau2);

  double tau1() const { return tau1_; }
  double tau2() const { return tau2_; }
  /// tau3 = theta1 - theta2 = -(tau1 + tau2), reduced into (-pi, pi].
  double tau3() const;
  std::array<double, 3> taus() const { return {tau1_, tau2_, tau3()}; }

 private:
  double tau1_;
  double tau2_;
};

/// Mutual arcs {sigma12, sigma23, sigma31}, each strictly inside (0, pi).
class GeneralShape {
 public:
  GeneralShape(double sigma12, double sigma23, double sigma31);

  double sigma12() const { return s_[0]; }
  double sigma23() const { return s_[1]; }
  double sigma31() const { return s_[2]; }

  /// Spherical triangle inequalities, equality allowed (collinear shapes).
  bool is_realizable(double tol = 1e-12) const;

 private:
  std::array<double, 3> s_;
};

struct SphericalConfiguration {
  std::array<double, 3> theta{};
  std::array<double, 3> phi{};

  /// All bodies on the meridian phi = 0 with theta in (-pi, pi].
  static SphericalConfiguration meridian(double theta1, double theta2,
                                         double theta3);

  /// cos of the arc between bodies i and j (zero-based).
  double cos_sigma(std::size_t i, std::size_t j) const;
  /// sin of the arc between bodies i and j, from the cross product of the
  /// two unit vectors.
  double sin_sigma(std::size_t i, std::size_t j) const;
  double sigma(std::size_t i, std::size_t j) const;

  bool is_nonsingular(double eps = kEpsSing) const;
};

GeneralShape shape_from_config(const SphericalConfiguration& config);

struct ReSolution {
  SphericalConfiguration config;
  int s = 1;
  double omega2 = 0.0;
  /// Set when A = 0 makes the configuration a free choice among rotations of
  /// the same shape.
  bool indefinite = false;
};

}  // namespace s2re
