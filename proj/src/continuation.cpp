#include "s2re/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "s2re/azero.hpp"
#include "s2re/re_conditions.hpp"

namespace s2re {

namespace {

struct TermValues {
  std::array<double, 3> f;   // f(tau_k)
  std::array<double, 3> q;   // f(tau_k) sin 2tau_k
  std::array<double, 3> df;  // f'(tau_k)
  std::array<double, 3> dq;  // q'(tau_k)
};

TermValues term_values(double tau1, double tau2) {
  const std::array<double, 3> tau{tau1, tau2, -(tau1 + tau2)};
  TermValues v;
  for (std::size_t k = 0; k < 3; ++k) {
    const double s = std::sin(tau[k]);
    const double c = std::cos(tau[k]);
    const double s2 = std::sin(2.0 * tau[k]);
    const double c2 = std::cos(2.0 * tau[k]);
    v.f[k] = s * std::abs(s);
    v.df[k] = 2.0 * std::abs(s) * c;
    v.q[k] = v.f[k] * s2;
    v.dq[k] = v.df[k] * s2 + 2.0 * v.f[k] * c2;
  }
  return v;
}

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

std::array<int, 3> sine_signs(const Vec2& p) {
  auto sgn = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
  return {sgn(std::sin(p[0])), sgn(std::sin(p[1])), sgn(std::sin(p[0] + p[1]))};
}

double min_abs_sine(const Vec2& p) {
  return std::min({std::abs(std::sin(p[0])), std::abs(std::sin(p[1])),
                   std::abs(std::sin(p[0] + p[1]))});
}

bool inside_box(const Vec2& p) {
  return p[0] > -kPi && p[0] < kPi && p[1] > 0.0 && p[1] < kPi;
}

Vec2 unit_tangent(const Vec2& grad) {
  const double n = norm(grad);
  return {-grad[1] / n, grad[0] / n};
}

struct Sweep {
  std::vector<Vec2> points;
  Termination termination = Termination::max_points;
};

// `tangent` is the unit direction of the first predictor step.
Sweep sweep(const MassTriple& m, const Vec2& start, const Vec2& tangent, double step,
            std::size_t max_points, const TraceOptions& opt,
            const std::vector<MeridianShape>& a_zero_points, bool stop_at_a_zero) {
  Sweep out;
  out.points.push_back(start);
  const auto region = sine_signs(start);
  const double grad_floor = 1e-8 * m.total();

  Vec2 t_prev = tangent;
  double h = step;
  int easy = 0;
  Vec2 p = start;

  while (out.points.size() < max_points) {
    const Vec2 grad = g_grad(m, p[0], p[1]);
    Vec2 t = t_prev;
    if (norm(grad) > grad_floor) {
      t = unit_tangent(grad);
      if (t[0] * t_prev[0] + t[1] * t_prev[1] < 0.0) t = {-t[0], -t[1]};
    }
    const Vec2 predicted{p[0] + h * t[0], p[1] + h * t[1]};
    Vec2 q = predicted;
    const bool ok = inside_box(q) && correct_onto_contour(m, q, opt.tol_g, opt.max_newton) &&
                    std::hypot(q[0] - predicted[0], q[1] - predicted[1]) < 0.5 * h &&
                    std::hypot(q[0] - p[0], q[1] - p[1]) < 2.0 * h;
    if (!ok) {
      if (!inside_box(predicted) && h <= opt.min_step) {
        out.termination = Termination::boundary;
        return out;
      }
      h *= 0.5;
      easy = 0;
      if (h < opt.min_step) {
        out.termination = min_abs_sine(p) < 1e-2 ? Termination::singular
                                                 : Termination::corrector_failure;
        return out;
      }
      continue;
    }
    if (!inside_box(q)) {
      out.termination = Termination::boundary;
      return out;
    }
    // Sagitta of the new chord, from its turn against the last direction.
    const double chord = std::hypot(q[0] - p[0], q[1] - p[1]);
    const double turn = std::atan2(std::abs(t_prev[0] * (q[1] - p[1]) - t_prev[1] * (q[0] - p[0])),
                                   t_prev[0] * (q[0] - p[0]) + t_prev[1] * (q[1] - p[1]));
    if (chord * turn / 8.0 > opt.max_chord_error && h > opt.min_step) {
      h *= 0.5;
      easy = 0;
      continue;
    }
    if (sine_signs(q) != region || min_abs_sine(q) <= kEpsSing) {
      out.termination = Termination::singular;
      return out;
    }
    if (stop_at_a_zero) {
      for (const MeridianShape& z : a_zero_points) {
        const std::vector<Vec2> seg{p, q};
        if (distance_to_polyline(seg, {z.tau1(), z.tau2()}) < 1e-6) {
          out.points.push_back(q);
          out.termination = Termination::a_zero;
          return out;
        }
      }
    }
    const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
    t_prev = {(q[0] - p[0]) / len, (q[1] - p[1]) / len};
    out.points.push_back(q);
    p = q;
    if (out.points.size() >= 10 &&
        std::hypot(q[0] - start[0], q[1] - start[1]) < 0.5 * step) {
      out.termination = Termination::closed_loop;
      return out;
    }
    if (++easy >= 10 && h < step) {
      h = std::min(2.0 * h, step);
      easy = 0;
    }
  }
  out.termination = Termination::max_points;
  return out;
}

}  // namespace

double f_signed(double x) {
  const double s = std::sin(x);
  return s * std::abs(s);
}

double g_eval(const MassTriple& m, double tau1, double tau2) {
  const TermValues v = term_values(tau1, tau2);
  return m.m1() * v.f[0] * (v.q[1] - v.q[2]) + m.m2() * v.f[1] * (v.q[2] - v.q[0]) +
         m.m3() * v.f[2] * (v.q[0] - v.q[1]);
}

double g_eval(const MassTriple& m, const MeridianShape& shape) {
  return g_eval(m, shape.tau1(), shape.tau2());
}

double g_term_scale(const MassTriple& m, double tau1, double tau2) {
  const TermValues v = term_values(tau1, tau2);
  double s = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    s += m[k] * std::abs(v.f[k]) * (std::abs(v.q[(k + 1) % 3]) + std::abs(v.q[(k + 2) % 3]));
  }
  return s;
}

double d_eval(const MassTriple& m, const MeridianShape& shape) {
  const double t1 = shape.tau1(), t2 = shape.tau2(), t3 = shape.tau3();
  const double m12 = m.m1() * m.m2(), m23 = m.m2() * m.m3(), m31 = m.m3() * m.m1();
  const double g12 = m12 * std::sin(2.0 * t3);
  const double g23 = m23 * std::sin(2.0 * t1);
  const double g31 = m31 * std::sin(2.0 * t2);
  const double f12 = m12 / f_signed(t3);
  const double f23 = m23 / f_signed(t1);
  const double f31 = m31 / f_signed(t2);
  return (g12 - g23) * (f31 - f12) - (g31 - g12) * (f12 - f23);
}

Vec2 g_grad(const MassTriple& m, double tau1, double tau2) {
  const TermValues v = term_values(tau1, tau2);
  const double m1 = m.m1(), m2 = m.m2(), m3 = m.m3();
  // Partials treating tau1, tau2, tau3 as independent.
  const double p1 = m1 * v.df[0] * (v.q[1] - v.q[2]) + (m3 * v.f[2] - m2 * v.f[1]) * v.dq[0];
  const double p2 = m2 * v.df[1] * (v.q[2] - v.q[0]) + (m1 * v.f[0] - m3 * v.f[2]) * v.dq[1];
  const double p3 = m3 * v.df[2] * (v.q[0] - v.q[1]) + (m2 * v.f[1] - m1 * v.f[0]) * v.dq[2];
  return {p1 - p3, p2 - p3};
}

Vec2 g_grad(const MassTriple& m, const MeridianShape& shape) {
  return g_grad(m, shape.tau1(), shape.tau2());
}

EquilateralHessian hessian_equilateral(const MassTriple& m, double fd_step) {
  EquilateralHessian h;
  const double k = 9.0 * std::numbers::sqrt3 / 4.0;
  const double m1 = m.m1(), m2 = m.m2(), m3 = m.m3();
  h.closed_form = {{{k * (m3 - m1), k * (m2 - m1)}, {k * (m2 - m1), k * (m2 - m3)}}};
  h.det_closed_form = h.closed_form[0][0] * h.closed_form[1][1] -
                      h.closed_form[0][1] * h.closed_form[1][0];

  const double te = 2.0 * kPi / 3.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const double d1 = j == 0 ? fd_step : 0.0;
    const double d2 = j == 1 ? fd_step : 0.0;
    const Vec2 plus = g_grad(m, te + d1, te + d2);
    const Vec2 minus = g_grad(m, te - d1, te - d2);
    for (std::size_t i = 0; i < 2; ++i) {
      h.finite_difference[i][j] = (plus[i] - minus[i]) / (2.0 * fd_step);
    }
  }
  h.det_finite_difference = h.finite_difference[0][0] * h.finite_difference[1][1] -
                            h.finite_difference[0][1] * h.finite_difference[1][0];
  return h;
}

double equal_mass_g(double m, const MeridianShape& shape) {
  const double t1 = shape.tau1();
  const double t2 = shape.tau2();
  if (!(std::sin(t1) > 0.0 && std::sin(t2) > 0.0 && std::sin(t1 + t2) < 0.0)) {
    throw std::domain_error("equal_mass_g: shape outside the equilateral region");
  }
  const double cofactor =
      3.0 - std::cos(2.0 * t1) - std::cos(2.0 * t2) - std::cos(2.0 * (t1 + t2));
  return 0.5 * m * cofactor * std::sin(t1 - t2) * std::sin(2.0 * t1 + t2) *
         std::sin(t1 + 2.0 * t2);
}

std::array<Vec2, 2> branch_directions_at_saddle(const MassTriple& m) {
  const double mmax = std::max({m.m1(), m.m2(), m.m3()});
  const double spread = std::max({std::abs(m.m1() - m.m2()), std::abs(m.m2() - m.m3()),
                                  std::abs(m.m3() - m.m1())});
  if (spread <= 1e-12 * mmax) {
    throw DegenerateSaddle("branch_directions_at_saddle: equal masses, three branches meet");
  }
  const Matrix2 h = hessian_equilateral(m).closed_form;
  const double a = h[0][0], b = h[0][1], d = h[1][1];
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), b);
  const double lp = mean + rad;  // > 0 at a saddle
  const double lm = mean - rad;  // < 0
  // Eigenvector for lp, picked from the better-conditioned row.
  Vec2 e1 = std::abs(a - lp) > std::abs(d - lp) ? Vec2{-b, a - lp} : Vec2{d - lp, -b};
  if (norm(e1) == 0.0) e1 = {1.0, 0.0};
  const double n1 = norm(e1);
  e1 = {e1[0] / n1, e1[1] / n1};
  const Vec2 e2{-e1[1], e1[0]};
  const double wa = std::sqrt(-lm);
  const double wb = std::sqrt(lp);
  std::array<Vec2, 2> dirs{Vec2{wa * e1[0] + wb * e2[0], wa * e1[1] + wb * e2[1]},
                           Vec2{wa * e1[0] - wb * e2[0], wa * e1[1] - wb * e2[1]}};
  for (Vec2& v : dirs) {
    const double n = norm(v);
    v = {v[0] / n, v[1] / n};
  }
  return dirs;
}

std::array<Vec2, 3> equal_mass_branch_directions() {
  const double r2 = std::numbers::sqrt2;
  const double r5 = std::sqrt(5.0);
  return {Vec2{1.0 / r2, 1.0 / r2}, Vec2{1.0 / r5, -2.0 / r5}, Vec2{2.0 / r5, -1.0 / r5}};
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::boundary:
      return "boundary";
    case Termination::singular:
      return "singular";
    case Termination::a_zero:
      return "a_zero";
    case Termination::max_points:
      return "max_points";
    case Termination::closed_loop:
      return "closed_loop";
    case Termination::corrector_failure:
      return "corrector_failure";
  }
  return "unknown";
}

bool correct_onto_contour(const MassTriple& m, Vec2& point, double tol_g, int max_newton) {
  const double target = tol_g * m.total();
  for (int it = 0; it <= max_newton; ++it) {
    const double g = g_eval(m, point[0], point[1]);
    if (!std::isfinite(g)) return false;
    const Vec2 grad = g_grad(m, point[0], point[1]);
    const double n2 = grad[0] * grad[0] + grad[1] * grad[1];
    if (std::abs(g) <= target) {
      // One more projection when it is a small refinement.
      if (n2 > 0.0) {
        const Vec2 dp{g * grad[0] / n2, g * grad[1] / n2};
        if (std::hypot(dp[0], dp[1]) < 1e-8) {
          const Vec2 refined{point[0] - dp[0], point[1] - dp[1]};
          if (std::abs(g_eval(m, refined[0], refined[1])) <= std::abs(g)) point = refined;
        }
      }
      return true;
    }
    if (it == max_newton || !(n2 > 0.0)) return false;
    const Vec2 dp{g * grad[0] / n2, g * grad[1] / n2};
    if (!(std::hypot(dp[0], dp[1]) < 0.5)) return false;
    point = {point[0] - dp[0], point[1] - dp[1]};
  }
  return false;
}

namespace {

// Forward sweep along `tangent`, backward sweep along -tangent unless the
// curve closed, then A = 0 flags.
ContinuationCurve assemble(const MassTriple& m, const Vec2& start, const Vec2& tangent,
                           double step, std::size_t max_points, const TraceOptions& options) {
  const std::vector<MeridianShape> zeros = azero_solutions(m).solutions;
  const bool stop_at_zero = false;

  ContinuationCurve curve;
  curve.step = step;
  Sweep fwd = sweep(m, start, tangent, step, max_points, options, zeros, stop_at_zero);
  curve.termination = fwd.termination;
  if (fwd.termination != Termination::closed_loop && options.both_directions) {
    Sweep bwd = sweep(m, start, {-tangent[0], -tangent[1]}, step, max_points, options, zeros,
                      stop_at_zero);
    curve.termination_backward = bwd.termination;
    curve.points.assign(bwd.points.rbegin(), bwd.points.rend() - 1);
  } else {
    curve.termination_backward = fwd.termination;
  }
  curve.points.insert(curve.points.end(), fwd.points.begin(), fwd.points.end());

  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const Vec2& p = curve.points[i];
    bool flagged = big_a(m, MeridianShape(p[0], p[1])) < kEpsA;
    if (!flagged && i + 1 < curve.points.size()) {
      const std::vector<Vec2> seg{p, curve.points[i + 1]};
      for (const MeridianShape& z : zeros) {
        const Vec2 zp{z.tau1(), z.tau2()};
        if (distance_to_polyline(seg, zp) < 1e-6) {
          const Vec2& q = curve.points[i + 1];
          const bool nearer_next =
              std::hypot(q[0] - zp[0], q[1] - zp[1]) < std::hypot(p[0] - zp[0], p[1] - zp[1]);
          const std::size_t idx = nearer_next ? i + 1 : i;
          if (curve.a_zero_crossings.empty() || curve.a_zero_crossings.back() != idx) {
            curve.a_zero_crossings.push_back(idx);
          }
        }
      }
      continue;
    }
    if (flagged && (curve.a_zero_crossings.empty() || curve.a_zero_crossings.back() != i)) {
      curve.a_zero_crossings.push_back(i);
    }
  }
  return curve;
}

void check_step(double step, std::size_t max_points) {
  if (!(step >= 1e-4 && step <= 1e-1)) {
    throw std::invalid_argument("trace_contour: step must lie in [1e-4, 1e-1]");
  }
  if (max_points < 2) throw std::invalid_argument("trace_contour: max_points too small");
}

}  // namespace

ContinuationCurve trace_contour(const MassTriple& m, const MeridianShape& seed,
                                double step, std::size_t max_points,
                                const TraceOptions& options) {
  check_step(step, max_points);
  Vec2 start{seed.tau1(), seed.tau2()};
  if (!correct_onto_contour(m, start, options.tol_g, 50) || !in_uphys(start[0], start[1])) {
    throw CorrectorDivergence("trace_contour: seed does not correct onto g = 0");
  }
  const Vec2 grad = g_grad(m, start[0], start[1]);
  if (norm(grad) <= 1e-8 * m.total()) {
    throw CorrectorDivergence("trace_contour: seed is a critical point of g");
  }
  return assemble(m, start, unit_tangent(grad), step, max_points, options);
}

ContinuationCurve trace_saddle_branch(const MassTriple& m, const Vec2& direction, double step,
                                      std::size_t max_points, const TraceOptions& options) {
  check_step(step, max_points);
  const double n = norm(direction);
  if (!(n > 0.0)) throw std::invalid_argument("trace_saddle_branch: zero direction");
  const Vec2 start{2.0 * kPi / 3.0, 2.0 * kPi / 3.0};
  return assemble(m, start, {direction[0] / n, direction[1] / n}, step, max_points, options);
}

bool is_euler_meridian_shape(const MassTriple& m, const MeridianShape& shape, double tol) {
  const double g = g_eval(m, shape);
  const double scale = g_term_scale(m, shape.tau1(), shape.tau2());
  return std::abs(g) < tol * scale && big_a(m, shape) > kEpsA;
}

double distance_to_polyline(const std::vector<Vec2>& points, const Vec2& p) {
  if (points.empty()) return std::numeric_limits<double>::infinity();
  double best = std::hypot(points[0][0] - p[0], points[0][1] - p[1]);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Vec2& a = points[i];
    const Vec2& b = points[i + 1];
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(a[0] + t * dx - p[0], a[1] + t * dy - p[1]));
  }
  return best;
}

}  // namespace s2re
