#include "s2re/mass_independent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace s2re {

namespace {

double sign_of_sin(double x) {
  const double s = std::sin(x);
  return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
}

// cos(x)|sin(x)|^3
double curve_term(double x) {
  const double s = std::sin(x);
  return std::cos(x) * std::abs(s) * s * s;
}

// curve_term(a) - curve_term(b) in product form. With h = cos sin^3,
//   h(a) - h(b) = sin(a-b) (cos(a+b) - cos 2(a+b) cos(a-b)) / 2,
//   h(a) + h(b) = sin(a+b) (cos(a-b) - cos(a+b) cos 2(a-b)) / 2,
// which keeps relative accuracy near the degenerate equilateral root.
double curve_term_difference(double a, double b) {
  const double sa = sign_of_sin(a);
  const double sb = sign_of_sin(b);
  if (sa == 0.0 || sb == 0.0) {
    return curve_term(a) - curve_term(b);
  }
  const double sum = a + b;
  const double diff = a - b;
  if (sa == sb) {
    return sa * 0.5 * std::sin(diff) *
           (std::cos(sum) - std::cos(2.0 * sum) * std::cos(diff));
  }
  return sa * 0.5 * std::sin(sum) *
         (std::cos(diff) - std::cos(sum) * std::cos(2.0 * diff));
}

double sqrt2() { return std::numbers::sqrt2; }

struct Newton2Result {
  double tau1;
  double tau2;
  double residual;
  bool converged;
};

Newton2Result polish_f(double tau1, double tau2) {
  for (int it = 0; it < 200; ++it) {
    const double r1 = f1(tau1, tau2);
    const double r2 = f2(tau1, tau2);
    if (!std::isfinite(r1) || !std::isfinite(r2)) break;
    if (r1 == 0.0 && r2 == 0.0) return {tau1, tau2, 0.0, true};
    const double d1 = curve_term_derivative(tau1);
    const double d2 = curve_term_derivative(tau2);
    const double d12 = curve_term_derivative(tau1 + tau2);
    // Jacobian of (f1, f2) with respect to (tau1, tau2).
    const double j11 = d1, j12 = -d2;
    const double j21 = d1 - d12, j22 = -d12;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    double s1 = -(r1 * j22 - j12 * r2) / det;
    double s2 = -(j11 * r2 - j21 * r1) / det;
    const double len = std::hypot(s1, s2);
    if (len > 0.1) {
      s1 *= 0.1 / len;
      s2 *= 0.1 / len;
    }
    tau1 += s1;
    tau2 += s2;
    if (std::hypot(s1, s2) < 1e-16) break;
  }
  const double res = std::max(std::abs(f1(tau1, tau2)), std::abs(f2(tau1, tau2)));
  return {tau1, tau2, res, std::isfinite(res)};
}

// Union-find over grid hits.
struct DisjointSet {
  std::vector<std::size_t> parent;
  std::size_t add() {
    parent.push_back(parent.size());
    return parent.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

double f1(double tau1, double tau2) { return curve_term_difference(tau1, tau2); }

double f2(double tau1, double tau2) {
  return curve_term_difference(tau1, tau1 + tau2);
}

double curve_term_derivative(double tau) {
  return std::abs(std::sin(tau)) * std::sin(3.0 * tau);
}

double isosceles_arc() { return 0.5 * std::acos((sqrt2() - 1.0) / 2.0); }

double isosceles_spin_factor() { return 16.0 / std::sqrt(16.0 * sqrt2() - 13.0); }

std::string_view shape_name(IndependentShape which) {
  switch (which) {
    case IndependentShape::equilateral:
      return "equilateral";
    case IndependentShape::isosceles_center3:
      return "isosceles_center3";
    case IndependentShape::isosceles_center1:
      return "isosceles_center1";
    case IndependentShape::isosceles_center2:
      return "isosceles_center2";
  }
  return "unknown";
}

const MeridianShape& IndependentShapeSet::get(IndependentShape which) const {
  switch (which) {
    case IndependentShape::equilateral:
      return equilateral;
    case IndependentShape::isosceles_center3:
      return isosceles_center3;
    case IndependentShape::isosceles_center1:
      return isosceles_center1;
    case IndependentShape::isosceles_center2:
      return isosceles_center2;
  }
  return equilateral;
}

IndependentShapeSet mass_independent_shapes() {
  const double t0 = isosceles_arc();
  const double te = 2.0 * kPi / 3.0;
  return {MeridianShape(te, te), MeridianShape(t0, t0), MeridianShape(-2.0 * t0, t0),
          MeridianShape(-t0, 2.0 * t0), t0};
}

MeridianShape independent_shape(IndependentShape which) {
  return mass_independent_shapes().get(which);
}

double isosceles_a2(const MassTriple& m, int center) {
  if (center < 1 || center > 3) {
    throw std::invalid_argument("isosceles_a2: center must be 1, 2 or 3");
  }
  const auto k = static_cast<std::size_t>(center - 1);
  const double mk = m[k];
  const double mi = m[(k + 1) % 3];
  const double mj = m[(k + 2) % 3];
  const double r2 = sqrt2();
  return (mi - mj) * (mi - mj) + (3.0 - 2.0 * r2) * mi * mj + mk * mk +
         (r2 - 1.0) * (mj * mk + mk * mi);
}

IndependentSpin spin_for_shape(const MassTriple& m, IndependentShape which) {
  IndependentSpin out;
  if (which == IndependentShape::equilateral) {
    out.a = big_a(m, independent_shape(which));
    if (!(out.a > kEpsA)) {
      out.indefinite = true;
      out.s = 1;
      out.omega2 = 0.0;
      return out;
    }
    out.s = -1;
    out.omega2 = kEquilateralSpinFactor * out.a;
    return out;
  }
  const int center = which == IndependentShape::isosceles_center3   ? 3
                     : which == IndependentShape::isosceles_center1 ? 1
                                                                    : 2;
  out.a = std::sqrt(isosceles_a2(m, center));
  out.s = 1;
  out.omega2 = isosceles_spin_factor() * out.a;
  return out;
}

BruteForceResult region_bruteforce(std::size_t grid_n, double tol) {
  if (grid_n < 2) throw std::invalid_argument("region_bruteforce: grid too small");
  const double h1 = kTwoPi / static_cast<double>(grid_n);
  const double h2 = kPi / static_cast<double>(grid_n);
  auto tau1_at = [&](std::size_t i) { return -kPi + (static_cast<double>(i) + 0.5) * h1; };
  auto tau2_at = [&](std::size_t j) { return (static_cast<double>(j) + 0.5) * h2; };

  constexpr std::int64_t kNone = -1;
  constexpr std::int64_t kReach = 2;
  std::vector<std::int64_t> label(grid_n * grid_n, kNone);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  DisjointSet sets;

  for (std::size_t i = 0; i < grid_n; ++i) {
    const double t1 = tau1_at(i);
    for (std::size_t j = 0; j < grid_n; ++j) {
      const double t2 = tau2_at(j);
      if (!in_uphys(t1, t2)) continue;
      if (!(std::abs(f1(t1, t2)) < tol && std::abs(f2(t1, t2)) < tol)) continue;
      const std::size_t id = sets.add();
      cells.emplace_back(i, j);
      label[i * grid_n + j] = static_cast<std::int64_t>(id);
      // Merge with already-labelled hits within two cells.
      for (std::int64_t di = -kReach; di <= 0; ++di) {
        const std::int64_t ii = static_cast<std::int64_t>(i) + di;
        if (ii < 0) continue;
        for (std::int64_t dj = -kReach; dj <= kReach; ++dj) {
          if (di == 0 && dj >= 0) break;
          const std::int64_t jj = static_cast<std::int64_t>(j) + dj;
          if (jj < 0 || jj >= static_cast<std::int64_t>(grid_n)) continue;
          const std::int64_t other = label[static_cast<std::size_t>(ii) * grid_n +
                                           static_cast<std::size_t>(jj)];
          if (other != kNone) sets.unite(id, static_cast<std::size_t>(other));
        }
      }
    }
  }

  BruteForceResult result;
  result.grid_hits = cells.size();

  // Accumulate centroids per root, in order of first appearance.
  std::vector<std::size_t> root_order;
  std::vector<std::int64_t> root_slot(cells.size(), kNone);
  std::vector<std::array<double, 3>> sums;  // sum tau1, sum tau2, count
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::size_t r = sets.find(c);
    if (root_slot[r] == kNone) {
      root_slot[r] = static_cast<std::int64_t>(sums.size());
      sums.push_back({0.0, 0.0, 0.0});
    }
    auto& acc = sums[static_cast<std::size_t>(root_slot[r])];
    acc[0] += tau1_at(cells[c].first);
    acc[1] += tau2_at(cells[c].second);
    acc[2] += 1.0;
  }
  result.raw_clusters = sums.size();

  for (const auto& acc : sums) {
    const Newton2Result p = polish_f(acc[0] / acc[2], acc[1] / acc[2]);
    const bool regular = p.converged && p.residual < 1e-12 &&
                         p.tau1 > -kPi && p.tau1 < kPi && p.tau2 > 0.0 &&
                         p.tau2 < kPi && std::abs(std::sin(p.tau1)) > 1e-6 &&
                         std::abs(std::sin(p.tau2)) > 1e-6 &&
                         std::abs(std::sin(p.tau1 + p.tau2)) > 1e-6;
    if (!regular) {
      ++result.rejected;
      continue;
    }
    const auto hits = static_cast<std::size_t>(acc[2]);
    auto same = std::find_if(result.clusters.begin(), result.clusters.end(),
                             [&](const ShapeCluster& c) {
                               return std::hypot(c.tau1 - p.tau1, c.tau2 - p.tau2) < 1e-6;
                             });
    if (same != result.clusters.end()) {
      same->hits += hits;
      continue;
    }
    result.clusters.push_back({p.tau1, p.tau2, hits, p.residual});
  }
  return result;
}

Spin two_body_spin(double m1, double m2, double delta) {
  if (!(m1 > 0.0) || !(m2 > 0.0) || !std::isfinite(m1) || !std::isfinite(m2)) {
    throw std::invalid_argument("two_body_spin: masses must be positive");
  }
  if (!(delta > 0.0 && delta < kPi)) {
    throw std::invalid_argument("two_body_spin: separation must lie in (0, pi)");
  }
  if (std::abs(delta - kPi / 2.0) < kEpsSing) {
    throw NoRelativeEquilibrium("two_body_spin: no relative equilibrium at separation pi/2");
  }
  const double a2 = std::hypot(m1 + m2 * std::cos(2.0 * delta), m2 * std::sin(2.0 * delta));
  const double s = std::sin(delta);
  const double signed_omega2 = a2 / (std::cos(delta) * s * s * s);
  return {signed_omega2 > 0.0 ? 1 : -1, std::abs(signed_omega2)};
}

double restricted_residual(double m1, double m2, double theta1, double theta2,
                           int s, double omega2, double theta3) {
  const double d12 = theta1 - theta2;
  const double a2 = std::hypot(m1 + m2 * std::cos(2.0 * d12), m2 * std::sin(2.0 * d12));
  const double x = static_cast<double>(s) * omega2 / (2.0 * a2);
  auto bracket = [x](double d) {
    const double sd = std::sin(d);
    return x * std::sin(2.0 * d) - 1.0 / (sd * std::abs(sd));
  };
  return m2 * bracket(theta2 - theta3) - m1 * bracket(theta3 - theta1);
}

std::vector<double> restricted_third_positions(double m1, double m2, double theta1,
                                               double theta2, int s, double omega2) {
  constexpr std::size_t kSamples = 4096;
  auto r = [&](double t3) { return restricted_residual(m1, m2, theta1, theta2, s, omega2, t3); };
  auto regular = [&](double t3) {
    return std::abs(std::sin(theta2 - t3)) > kEpsSing &&
           std::abs(std::sin(t3 - theta1)) > kEpsSing;
  };

  std::vector<double> roots;
  auto accept = [&](double t3) {
    if (!regular(t3) || !(std::abs(r(t3)) < 1e-10)) return;
    const double t = reduce_angle(t3);
    for (double existing : roots) {
      if (std::abs(reduce_angle(existing - t)) < 1e-9) return;
    }
    roots.push_back(t);
  };

  const double h = kTwoPi / static_cast<double>(kSamples);
  double prev_t = -kPi + h;
  double prev_r = r(prev_t);
  for (std::size_t k = 2; k <= kSamples + 1; ++k) {
    // The last sample wraps to -pi + h so the interval (pi, pi + h) is covered.
    const double t = -kPi + static_cast<double>(k) * h;
    const double rt = r(t);
    if (std::isfinite(prev_r) && prev_r == 0.0) {
      accept(prev_t);
    } else if (std::isfinite(prev_r) && std::isfinite(rt) && (prev_r < 0.0) != (rt < 0.0) &&
               rt != 0.0) {
      double lo = prev_t, hi = t, rlo = prev_r;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double rm = r(mid);
        if (rm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((rm < 0.0) == (rlo < 0.0)) {
          lo = mid;
          rlo = rm;
        } else {
          hi = mid;
        }
      }
      const double cand = std::abs(r(lo)) < std::abs(r(hi)) ? lo : hi;
      accept(cand);
    }
    prev_t = t;
    prev_r = rt;
  }

  // Double roots touch zero without a sign change: refine every sample where
  // |r| has a local minimum by bisecting on the sign of r'.
  auto slope = [&](double t3) {
    constexpr double d = 1e-6;
    return r(t3 + d) - r(t3 - d);
  };
  for (std::size_t k = 1; k <= kSamples; ++k) {
    const double t = -kPi + static_cast<double>(k) * h;
    const double rm = r(t - h), r0 = r(t), rp = r(t + h);
    if (!std::isfinite(rm) || !std::isfinite(r0) || !std::isfinite(rp)) continue;
    if (!(std::abs(r0) <= std::abs(rm) && std::abs(r0) <= std::abs(rp))) continue;
    if ((rm < 0.0) != (r0 < 0.0) || (rp < 0.0) != (r0 < 0.0)) continue;
    double lo = t - h, hi = t + h;
    double slo = slope(lo);
    if ((slo < 0.0) == (slope(hi) < 0.0)) continue;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double sm = slope(mid);
      if ((sm < 0.0) == (slo < 0.0)) {
        lo = mid;
        slo = sm;
      } else {
        hi = mid;
      }
    }
    accept(0.5 * (lo + hi));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace s2re
