#include "s2re/core.hpp"

#include <algorithm>
#include <cmath>

namespace s2re {

double reduce_angle(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("reduce_angle: non-finite angle");
  }
  double r = std::remainder(x, kTwoPi);  // exact, in [-pi, pi]
  if (r <= -kPi) {
    r += kTwoPi;
  }
  return r;
}

MassTriple::MassTriple(double m1, double m2, double m3) : m_{m1, m2, m3} {
  for (double m : m_) {
    if (!std::isfinite(m) || !(m > 0.0)) {
      throw std::invalid_argument("MassTriple: masses must be positive and finite");
    }
  }
}

bool in_uphys(double tau1, double tau2) {
  if (!std::isfinite(tau1) || !std::isfinite(tau2)) {
    return false;
  }
  if (!(tau1 > -kPi && tau1 < kPi && tau2 > 0.0 && tau2 < kPi)) {
    return false;
  }
  return std::abs(std::sin(tau1)) > kEpsSing &&
         std::abs(std::sin(tau2)) > kEpsSing &&
         std::abs(std::sin(tau1 + tau2)) > kEpsSing;
}

MeridianShape::MeridianShape(double tau1, double tau2)
    : tau1_(reduce_angle(tau1)), tau2_(reduce_angle(tau2)) {
  if (tau2_ < 0.0) {
    // Rotating the meridian by pi about the axis maps theta -> -theta.
    tau1_ = reduce_angle(-tau1_);
    tau2_ = -tau2_;
  }
  if (!in_uphys(tau1_, tau2_)) {
    throw SingularityError("MeridianShape: shape outside U_phys");
  }
}

double MeridianShape::tau3() const { return reduce_angle(-(tau1_ + tau2_)); }

GeneralShape::GeneralShape(double sigma12, double sigma23, double sigma31)
    : s_{sigma12, sigma23, sigma31} {
  for (double s : s_) {
    if (!std::isfinite(s) || !(s > 0.0 && s < kPi)) {
      throw SingularityError("GeneralShape: arcs must lie in (0, pi)");
    }
  }
}

bool GeneralShape::is_realizable(double tol) const {
  for (std::size_t k = 0; k < 3; ++k) {
    const double si = s_[(k + 1) % 3];
    const double sj = s_[(k + 2) % 3];
    const double sk = s_[k];
    if (sk < std::abs(si - sj) - tol) return false;
    if (sk > std::min(si + sj, kTwoPi - si - sj) + tol) return false;
  }
  return true;
}

SphericalConfiguration SphericalConfiguration::meridian(double theta1,
                                                        double theta2,
                                                        double theta3) {
  SphericalConfiguration c;
  c.theta = {theta1, theta2, theta3};
  c.phi = {0.0, 0.0, 0.0};
  return c;
}

double SphericalConfiguration::cos_sigma(std::size_t i, std::size_t j) const {
  return std::cos(theta[i]) * std::cos(theta[j]) +
         std::sin(theta[i]) * std::sin(theta[j]) * std::cos(phi[i] - phi[j]);
}

double SphericalConfiguration::sin_sigma(std::size_t i, std::size_t j) const {
  // Frame rotated so that body i sits at phi = 0.
  const double si = std::sin(theta[i]);
  const double ci = std::cos(theta[i]);
  const double sj = std::sin(theta[j]);
  const double cj = std::cos(theta[j]);
  const double d = phi[j] - phi[i];
  const double x = ci * sj * std::sin(d);
  const double y = ci * sj * std::cos(d) - si * cj;
  const double z = si * sj * std::sin(d);
  return std::sqrt(x * x + y * y + z * z);
}

double SphericalConfiguration::sigma(std::size_t i, std::size_t j) const {
  return std::atan2(sin_sigma(i, j), cos_sigma(i, j));
}

bool SphericalConfiguration::is_nonsingular(double eps) const {
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (!(sin_sigma(i, j) > eps)) return false;
    }
  }
  return true;
}

GeneralShape shape_from_config(const SphericalConfiguration& config) {
  if (!config.is_nonsingular()) {
    throw SingularityError("shape_from_config: coincident or antipodal pair");
  }
  return GeneralShape(config.sigma(0, 1), config.sigma(1, 2), config.sigma(2, 0));
}

}  // namespace s2re
