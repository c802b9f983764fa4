#include "s2re/re_conditions.hpp"

#include <algorithm>
#include <cmath>

namespace s2re {

namespace {

double cube(double x) { return x * x * x; }

// sin(x)/|sin(x)|^3, i.e. 1/(sin x |sin x|).
double inverse_signed_square(double x) {
  const double s = std::sin(x);
  return 1.0 / (s * std::abs(s));
}

struct PairTerms {
  // Index order: (12), (23), (31); pair (ij) uses tau_k.
  std::array<double, 3> g;  // m_i m_j sin 2tau_k
  std::array<double, 3> f;  // m_i m_j / (sin tau_k |sin tau_k|)
};

PairTerms pair_terms(const MassTriple& m, const MeridianShape& shape) {
  const double t1 = shape.tau1();
  const double t2 = shape.tau2();
  const double t3 = shape.tau3();
  const double m12 = m.m1() * m.m2();
  const double m23 = m.m2() * m.m3();
  const double m31 = m.m3() * m.m1();
  return {{m12 * std::sin(2.0 * t3), m23 * std::sin(2.0 * t1), m31 * std::sin(2.0 * t2)},
          {m12 * inverse_signed_square(t3), m23 * inverse_signed_square(t1),
           m31 * inverse_signed_square(t2)}};
}

}  // namespace

LambdaTriple lambda_triple(const MassTriple& m, const GeneralShape& shape) {
  const double s12 = shape.sigma12();
  const double s23 = shape.sigma23();
  const double s31 = shape.sigma31();
  const double c12 = std::cos(s12), c23 = std::cos(s23), c31 = std::cos(s31);
  const double q12 = cube(std::sin(s12)), q23 = cube(std::sin(s23)),
               q31 = cube(std::sin(s31));
  const double m1 = m.m1(), m2 = m.m2(), m3 = m.m3();
  LambdaTriple l;
  l.lambda1 = ((m2 + m3) * q23 - m2 * c12 * q31 - m3 * c31 * q12) / q23;
  l.lambda2 = ((m3 + m1) * q31 - m3 * c23 * q12 - m1 * c12 * q23) / q31;
  l.lambda3 = ((m1 + m2) * q12 - m1 * c31 * q23 - m2 * c23 * q31) / q12;
  return l;
}

bool is_lagrange_shape(const MassTriple& m, const GeneralShape& shape, double tol) {
  const LambdaTriple l = lambda_triple(m, shape);
  const double spread = std::max({std::abs(l.lambda1 - l.lambda2),
                                  std::abs(l.lambda2 - l.lambda3),
                                  std::abs(l.lambda3 - l.lambda1)});
  const double scale =
      1.0 + std::max({std::abs(l.lambda1), std::abs(l.lambda2), std::abs(l.lambda3)});
  return spread < tol * scale;
}

Matrix3 inertia_matrix(const MassTriple& m, const GeneralShape& shape) {
  const double m1 = m.m1(), m2 = m.m2(), m3 = m.m3();
  const double j12 = -std::sqrt(m1 * m2) * std::cos(shape.sigma12());
  const double j23 = -std::sqrt(m2 * m3) * std::cos(shape.sigma23());
  const double j31 = -std::sqrt(m3 * m1) * std::cos(shape.sigma31());
  return {{{m2 + m3, j12, j31}, {j12, m3 + m1, j23}, {j31, j23, m1 + m2}}};
}

std::array<double, 2> equator_residuals(const MassTriple& m, double dphi12,
                                        double dphi23) {
  const double dphi31 = -(dphi12 + dphi23);
  for (double d : {dphi12, dphi23, dphi31}) {
    if (!(std::abs(std::sin(d)) > kEpsSing)) {
      throw SingularityError("equator_residuals: singular spacing");
    }
  }
  const double e12 = m.m1() * m.m2() * inverse_signed_square(dphi12);
  const double e23 = m.m2() * m.m3() * inverse_signed_square(dphi23);
  const double e31 = m.m3() * m.m1() * inverse_signed_square(dphi31);
  return {e12 - e23, e23 - e31};
}

double big_a(const MassTriple& m, const MeridianShape& shape) {
  // Realization theta1 = 0, theta2 = -tau3, theta3 = tau2.
  const double a2 = -2.0 * shape.tau3();
  const double a3 = 2.0 * shape.tau2();
  const double x = m.m1() + m.m2() * std::cos(a2) + m.m3() * std::cos(a3);
  const double y = m.m2() * std::sin(a2) + m.m3() * std::sin(a3);
  return std::hypot(x, y);
}

std::array<double, 2> meridian_residuals(const MassTriple& m,
                                         const MeridianShape& shape, int s,
                                         double omega2) {
  const double a = big_a(m, shape);
  if (!(a > kEpsA)) {
    throw AZeroError("meridian_residuals: A = 0, use the exceptional-set analysis");
  }
  const double x = static_cast<double>(s) * omega2 / (2.0 * a);
  const PairTerms p = pair_terms(m, shape);
  std::array<double, 3> bracket{};
  for (std::size_t k = 0; k < 3; ++k) bracket[k] = x * p.g[k] - p.f[k];
  return {bracket[0] - bracket[1], bracket[1] - bracket[2]};
}

double meridian_residual_norm(const MassTriple& m, const MeridianShape& shape, int s,
                              double omega2) {
  const auto r = meridian_residuals(m, shape, s, omega2);
  const double x = static_cast<double>(s) * omega2 / (2.0 * big_a(m, shape));
  const PairTerms p = pair_terms(m, shape);
  double scale = 1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    scale = std::max({scale, std::abs(x * p.g[k]), std::abs(p.f[k])});
  }
  return std::max(std::abs(r[0]), std::abs(r[1])) / scale;
}

std::optional<Spin> solve_s_omega2(const MassTriple& m, const MeridianShape& shape) {
  const double a = big_a(m, shape);
  if (!(a > kEpsA)) {
    throw AZeroError("solve_s_omega2: A = 0, configuration indeterminate");
  }
  const PairTerms p = pair_terms(m, shape);
  // x (G12 - G23) = F12 - F23,  x (G31 - G12) = F31 - F12.
  const double a1 = p.g[0] - p.g[1];
  const double a2 = p.g[2] - p.g[0];
  const double b1 = p.f[0] - p.f[1];
  const double b2 = p.f[2] - p.f[0];

  const double g_scale = std::max({std::abs(p.g[0]), std::abs(p.g[1]), std::abs(p.g[2])});
  const double f_scale = std::max({std::abs(p.f[0]), std::abs(p.f[1]), std::abs(p.f[2])});
  const double norm_a = std::hypot(a1, a2);
  if (!(norm_a > 1e-12 * g_scale)) {
    return std::nullopt;  // x undetermined
  }
  const double x = (a1 * b1 + a2 * b2) / (norm_a * norm_a);
  // Both equations must hold for this x, relative to the largest term (the
  // F terms blow up next to singular lines).
  const double scale = std::max({1.0, std::abs(x) * g_scale, f_scale});
  if (!(std::max(std::abs(x * a1 - b1), std::abs(x * a2 - b2)) <= 1e-9 * scale)) {
    return std::nullopt;
  }
  if (std::abs(x) * g_scale <= 1e-15 * f_scale) {
    return Spin{1, 0.0};
  }
  return Spin{x > 0.0 ? 1 : -1, 2.0 * a * std::abs(x)};
}

std::array<double, 2> double_angle_pair(const MassTriple& m,
                                        const MeridianShape& shape, int s) {
  const double a = big_a(m, shape);
  if (!(a > kEpsA)) {
    throw AZeroError("configuration_from_meridian_shape: A = 0, map not unique");
  }
  // theta1 - theta2 = tau3, theta1 - theta3 = -tau2.
  const double t3 = shape.tau3();
  const double t2 = shape.tau2();
  const double sa = static_cast<double>(s) / a;
  const double c = sa * (m.m1() + m.m2() * std::cos(2.0 * t3) + m.m3() * std::cos(2.0 * t2));
  const double sn = sa * (m.m2() * std::sin(2.0 * t3) - m.m3() * std::sin(2.0 * t2));
  return {c, sn};
}

SphericalConfiguration configuration_from_meridian_shape(const MassTriple& m,
                                                         const MeridianShape& shape,
                                                         int s) {
  const auto [c, sn] = double_angle_pair(m, shape, s);
  if (!(std::abs(c * c + sn * sn - 1.0) < 1e-9)) {
    throw std::logic_error("configuration_from_meridian_shape: normalization lost");
  }
  const double theta1 = 0.5 * std::atan2(sn, c);
  return SphericalConfiguration::meridian(theta1, reduce_angle(theta1 - shape.tau3()),
                                          reduce_angle(theta1 + shape.tau2()));
}

std::optional<ReSolution> meridian_re_solution(const MassTriple& m,
                                               const MeridianShape& shape) {
  const std::optional<Spin> spin = solve_s_omega2(m, shape);
  if (!spin) return std::nullopt;
  ReSolution sol;
  sol.s = spin->s;
  sol.omega2 = spin->omega2;
  sol.config = configuration_from_meridian_shape(m, shape, spin->s);
  return sol;
}

}  // namespace s2re
