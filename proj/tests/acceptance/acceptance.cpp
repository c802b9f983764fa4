// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "s2re/azero.hpp"
#include "s2re/continuation.hpp"
#include "s2re/dynamics.hpp"
#include "s2re/mass_independent.hpp"
#include "s2re/re_conditions.hpp"
#include "test_support.hpp"

using namespace s2re;

namespace {

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

const std::vector<MassTriple>& figure_masses() {
  static const std::vector<MassTriple> v{MassTriple(0.1, 0.5, 1), MassTriple(0.4, 0.5, 1),
                                         MassTriple(0.8, 0.9, 1), MassTriple(1, 1, 1)};
  return v;
}

double spread2(const MassTriple& m) {
  return std::pow(m.m1() - m.m2(), 2) + std::pow(m.m2() - m.m3(), 2) +
         std::pow(m.m3() - m.m1(), 2);
}

// 1. Closed-form roots of 4c(c + 1) = 1 and 4c(c + 1) = -1.
void closed_form_roots() {
  const double t0 = 0.5 * std::acos((std::sqrt(2.0) - 1) / 2);
  const double c = std::cos(2 * t0);
  const double r1 = std::abs(4 * c * (c + 1) - 1);
  const double ce = std::cos(4 * kPi / 3);
  const double r2 = std::abs(4 * ce * (ce + 1) + 1);
  const bool pass = r1 < 1e-14 && r2 < 1e-14 && std::abs(isosceles_arc() - t0) < 1e-15 &&
                    std::abs(t0 - 0.6810) < 1e-4;  // quoted to four truncated digits
  report(1, "closed-form roots", pass,
         "tau0=" + fmt("%.6f", t0) + " |isosceles|=" + fmt("%.1e", r1) +
             " |equilateral|=" + fmt("%.1e", r2));
}

// 2. Meridian residuals at the four shapes for 100 random triples.
void mass_independence() {
  Stopwatch sw;
  auto rng = sample::make_rng(1001);
  double worst = 0;
  for (int n = 0; n < 100; ++n) {
    const MassTriple m = sample::random_masses(rng);
    for (IndependentShape w : kIndependentShapes) {
      const IndependentSpin spin = spin_for_shape(m, w);
      const auto r = meridian_residuals(m, independent_shape(w), spin.s, spin.omega2);
      worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
    }
  }
  report(2, "mass independence", worst < 1e-10 && sw.seconds() < 1.0,
         "max residual " + fmt("%.2e", worst) + " in " + fmt("%.3f", sw.seconds()) + " s");
}

// 3. The ODE decides between the derived and the printed spin constants.
void spin_constants() {
  Stopwatch sw;
  const double printed_equilateral = 8 / (3 * std::sqrt(3.0));
  const double printed_isosceles = 16 / std::sqrt(16 * std::sqrt(2.0) - 12);
  bool correct_pass = true, printed_fail = true;
  double correct_worst = 0, printed_least = std::numeric_limits<double>::infinity();
  int truncated = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const MassTriple& m = figure_masses()[k];
    for (IndependentShape w : kIndependentShapes) {
      const IndependentSpin spin = spin_for_shape(m, w);
      ReSolution sol;
      sol.s = spin.s;
      sol.omega2 = spin.omega2;
      sol.config = configuration_from_meridian_shape(m, independent_shape(w), spin.s);
      const VerifyResult v = verify_re(m, sol, 10, 1e-6);
      correct_pass = correct_pass && v.passed;
      correct_worst = std::max(
          {correct_worst, v.report.max_theta_drift, v.report.max_phi_deviation});

      ReSolution printed = sol;
      const double factor =
          w == IndependentShape::equilateral ? printed_equilateral : printed_isosceles;
      printed.omega2 = factor * spin.a;
      double drift = std::numeric_limits<double>::infinity();
      try {
        const VerifyResult p = verify_re(m, printed, 10, 1e-6);
        drift = std::max(p.report.max_theta_drift, p.report.max_phi_deviation);
      } catch (const TruncatedTrajectory&) {
        ++truncated;
      }
      printed_fail = printed_fail && drift > 1e-2;
      printed_least = std::min(printed_least, drift);
    }
  }
  report(3, "spin constants by dynamics", correct_pass && printed_fail && sw.seconds() < 30,
         std::string("derived constants ") + (correct_pass ? "pass" : "FAIL") + " (max drift " +
             fmt("%.1e", correct_worst) + "); printed constants " +
             (printed_fail ? "fail" : "PASS") + " (min drift " + fmt("%.2e", printed_least) +
             ", " + std::to_string(truncated) + " truncated) in " + fmt("%.1f", sw.seconds()) +
             " s");
}

// 4. cos^2 + sin^2 of the double angle is one.
void normalization() {
  auto rng = sample::make_rng(1004);
  double worst = 0;
  int used = 0;
  while (used < 10000) {
    const MassTriple m = sample::random_masses(rng);
    const MeridianShape s = sample::random_shape(rng);
    if (big_a(m, s) <= 1e-6) continue;
    for (int sign : {-1, 1}) {
      const auto [c, sn] = double_angle_pair(m, s, sign);
      worst = std::max(worst, std::abs(c * c + sn * sn - 1));
    }
    ++used;
  }
  report(4, "normalization identity", worst < 1e-12,
         "max |cos^2+sin^2-1| " + fmt("%.1e", worst) + " over 10000 pairs");
}

// 5. Brute-force search for shapes with f1 = f2 = 0.
void uniqueness() {
  Stopwatch sw;
  const BruteForceResult r = region_bruteforce(2000, 5e-3);
  double worst = 0;
  std::vector<bool> matched(kIndependentShapes.size(), false);
  for (const ShapeCluster& c : r.clusters) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t which = 0;
    for (std::size_t k = 0; k < kIndependentShapes.size(); ++k) {
      const MeridianShape s = independent_shape(kIndependentShapes[k]);
      const double d = std::hypot(c.tau1 - s.tau1(), c.tau2 - s.tau2());
      if (d < best) {
        best = d;
        which = k;
      }
    }
    matched[which] = true;
    worst = std::max(worst, best);
  }
  const bool all = std::all_of(matched.begin(), matched.end(), [](bool b) { return b; });
  report(5, "uniqueness brute force",
         r.clusters.size() == 4 && all && worst < 1e-8 && sw.seconds() < 60,
         std::to_string(r.clusters.size()) + " clusters (" + std::to_string(r.grid_hits) +
             " grid hits, " + std::to_string(r.rejected) + " singular rejected), max offset " +
             fmt("%.1e", worst) + " in " + fmt("%.1f", sw.seconds()) + " s");
}

// 6. Equal-mass factorization of g, and the form with single angles.
void equal_mass_factorization() {
  auto rng = sample::make_rng(1006);
  double worst = 0, printed_worst = 0;
  int used = 0;
  while (used < 10000) {
    const double t1 = sample::uniform(rng, 1e-3, kPi - 1e-3);
    const double t2 = sample::uniform(rng, 1e-3, kPi - 1e-3);
    if (!(std::sin(t1 + t2) < -1e-3)) continue;
    ++used;
    const double mass = std::exp(sample::uniform(rng, std::log(0.1), std::log(10.0)));
    const MeridianShape s(t1, t2);
    const double g = g_eval(MassTriple(mass, mass, mass), s);
    worst = std::max(worst, std::abs(g - equal_mass_g(mass, s)) / std::max(1.0, std::abs(g)));
    const double printed = mass / 2 * (3 - std::cos(t1) - std::cos(t2) - std::cos(t1 + t2)) *
                           std::sin(t1 - t2) * std::sin(2 * t1 + t2) * std::sin(t1 + 2 * t2);
    printed_worst = std::max(printed_worst, std::abs(g - printed) / std::max(1.0, std::abs(g)));
  }
  report(6, "equal-mass factorization", worst < 1e-10,
         "double-angle cofactor max rel err " + fmt("%.1e", worst) +
             "; single-angle cofactor as printed " + (printed_worst < 1e-10 ? "agrees" : "fails") +
             " (max rel err " + fmt("%.2e", printed_worst) + ")");
}

// 7. Saddle at the equilateral shape.
void saddle() {
  auto rng = sample::make_rng(1007);
  std::vector<double> ratios;
  double asym = 0;
  bool negative = true;
  while (ratios.size() < 20) {
    const MassTriple m = sample::random_masses(rng);
    const double lo = std::min({m.m1(), m.m2(), m.m3()});
    if (std::sqrt(spread2(m)) < 1e-2 * lo) continue;
    const EquilateralHessian h = hessian_equilateral(m);
    asym = std::max(asym, std::abs(h.finite_difference[0][1] - h.finite_difference[1][0]));
    negative = negative && h.det_finite_difference < 0;
    ratios.push_back(h.det_finite_difference / spread2(m));
  }
  double mean = 0;
  for (double r : ratios) mean += r / static_cast<double>(ratios.size());
  double spread = 0;
  for (double r : ratios) spread = std::max(spread, std::abs(r - mean) / std::abs(mean));
  const double target = -243.0 / 32.0;
  const double vs_target = std::abs(mean - target) / std::abs(target);
  report(7, "saddle structure", asym < 1e-8 && negative && spread < 1e-6,
         "asymmetry " + fmt("%.1e", asym) + ", det/sum(mi-mj)^2 = " + fmt("%.9f", mean) +
             " (spread " + fmt("%.1e", spread) + "), vs -243/32: rel diff " +
             fmt("%.1e", vs_target) + (vs_target < 1e-6 ? " agrees" : " differs"));
}

// 8. The A = 0 set.
void azero() {
  const AZeroSolutionSet eq = azero_solutions(MassTriple(1, 1, 1));
  const double expected[4][2] = {
      {-2 * kPi / 3, kPi / 3}, {-kPi / 3, 2 * kPi / 3}, {kPi / 3, kPi / 3}, {2 * kPi / 3, 2 * kPi / 3}};
  bool list_ok = eq.solutions.size() == 4;
  for (std::size_t k = 0; list_ok && k < 4; ++k) {
    list_ok = std::abs(eq.solutions[k].tau1() - expected[k][0]) < 1e-12 &&
              std::abs(eq.solutions[k].tau2() - expected[k][1]) < 1e-12;
  }
  auto rng = sample::make_rng(1008);
  bool sizes_ok = true;
  double worst_a = 0;
  std::size_t with_solutions = 0;
  for (int n = 0; n < 100000; ++n) {
    const MassTriple m = sample::random_masses(rng);
    const AZeroSolutionSet s = azero_solutions(m);
    sizes_ok = sizes_ok && (s.solutions.empty() || s.solutions.size() == 4);
    if (!s.solutions.empty()) ++with_solutions;
    for (const MeridianShape& x : s.solutions) worst_a = std::max(worst_a, big_a(m, x));
  }
  for (const MeridianShape& x : eq.solutions) worst_a = std::max(worst_a, big_a(MassTriple(1, 1, 1), x));
  report(8, "A = 0 set", list_ok && sizes_ok && worst_a < 1e-12,
         std::string("equal-mass list ") + (list_ok ? "matches" : "differs") + ", sizes " +
             (sizes_ok ? "in {0,4}" : "OUT OF {0,4}") + " (" + std::to_string(with_solutions) +
             " of 100000 nonempty), max A " + fmt("%.1e", worst_a));
}

// 9. Continuation curves through the mass-independent shapes.
void continuation() {
  Stopwatch sw;
  bool pass = true;
  double worst_dist = 0, worst_res = 0;
  std::size_t curves = 0, points = 0, extra_hits = 0;
  for (const MassTriple& m : figure_masses()) {
    struct Seed {
      Vec2 at;  // branch direction for the saddle
      std::size_t target;
      bool saddle;
    };
    std::vector<Seed> seeds;
    for (std::size_t k = 0; k < kIndependentShapes.size(); ++k) {
      const MeridianShape s = independent_shape(kIndependentShapes[k]);
      if (kIndependentShapes[k] == IndependentShape::equilateral) {
        std::vector<Vec2> dirs;
        if (spread2(m) == 0.0) {
          for (const Vec2& d : equal_mass_branch_directions()) dirs.push_back(d);
        } else {
          for (const Vec2& d : branch_directions_at_saddle(m)) dirs.push_back(d);
        }
        for (const Vec2& d : dirs) seeds.push_back({d, k, true});
      } else {
        seeds.push_back({{s.tau1() + 3e-3, s.tau2() - 2e-3}, k, false});
      }
    }
    for (const Seed& seed : seeds) {
      const ContinuationCurve c =
          seed.saddle ? trace_saddle_branch(m, seed.at, 1e-3, 20000)
                      : trace_contour(m, MeridianShape(seed.at[0], seed.at[1]), 1e-3, 20000);
      ++curves;
      points += c.points.size();
      for (std::size_t k = 0; k < kIndependentShapes.size(); ++k) {
        const MeridianShape s = independent_shape(kIndependentShapes[k]);
        const double d = distance_to_polyline(c.points, {s.tau1(), s.tau2()});
        if (k == seed.target) {
          worst_dist = std::max(worst_dist, d);
          pass = pass && d < 1e-6;
        } else if (d < 1e-6) {
          ++extra_hits;
        }
      }
      for (const Vec2& p : c.points) {
        const MeridianShape s(p[0], p[1]);
        if (big_a(m, s) <= kEpsA) continue;
        const auto spin = solve_s_omega2(m, s);
        const double r = spin ? meridian_residual_norm(m, s, spin->s, spin->omega2)
                              : std::numeric_limits<double>::infinity();
        worst_res = std::max(worst_res, r);
      }
    }
  }
  pass = pass && worst_res < 1e-8 && sw.seconds() < 30;
  report(9, "continuation through fixed points", pass,
         std::to_string(curves) + " curves, " + std::to_string(points) +
             " points, max distance to seeded shape " + fmt("%.1e", worst_dist) +
             ", other shapes passed " + std::to_string(extra_hits) + ", max residual " +
             fmt("%.1e", worst_res) + " in " + fmt("%.1f", sw.seconds()) + " s");
}

GeneralShape random_general_shape(std::mt19937_64& rng) {
  for (;;) {
    const GeneralShape s(sample::uniform(rng, 0.05, kPi - 0.05),
                         sample::uniform(rng, 0.05, kPi - 0.05),
                         sample::uniform(rng, 0.05, kPi - 0.05));
    if (s.is_realizable(0.0)) return s;
  }
}

// 10. Negative results and the two-body and restricted cases.
void negative_results() {
  auto rng = sample::make_rng(1010);
  const MassTriple ms[3] = {sample::random_masses(rng), sample::random_masses(rng),
                            sample::random_masses(rng)};
  int lagrange = 0, equator = 0;
  for (int n = 0; n < 100000; ++n) {
    const GeneralShape s = random_general_shape(rng);
    bool all = true;
    for (const MassTriple& m : ms) all = all && is_lagrange_shape(m, s, 1e-8);
    lagrange += all;

    const double x = sample::uniform(rng, -kPi, kPi), y = sample::uniform(rng, -kPi, kPi);
    if (std::abs(std::sin(x)) < 1e-6 || std::abs(std::sin(y)) < 1e-6 ||
        std::abs(std::sin(x + y)) < 1e-6) {
      continue;
    }
    all = true;
    for (const MassTriple& m : ms) {
      const auto r = equator_residuals(m, x, y);
      const double scale = m.m1() * m.m2() + m.m2() * m.m3() + m.m3() * m.m1();
      all = all && std::abs(r[0]) < 1e-8 * scale && std::abs(r[1]) < 1e-8 * scale;
    }
    equator += all;
  }

  std::vector<int> failed;
  for (int k = 0; k < 1000; ++k) {
    const double delta = kPi / 2 + (k - 500) * kPi / 1001.0;
    try {
      two_body_spin(0.7, 1.3, delta);
    } catch (const NoRelativeEquilibrium&) {
      failed.push_back(k);
    }
  }
  const bool sweep_ok = failed == std::vector<int>{500};

  int restricted_ok = 0;
  for (int n = 0; n < 20; ++n) {
    const double m1 = std::exp(sample::uniform(rng, std::log(0.1), std::log(10.0)));
    const double m2 = std::exp(sample::uniform(rng, std::log(0.1), std::log(10.0)));
    bool all = true;
    for (IndependentShape w : kIndependentShapes) {
      const MeridianShape s = independent_shape(w);
      const double th1 = 0.0, th2 = -s.tau3(), th3 = s.tau2();
      const Spin sp = two_body_spin(m1, m2, std::abs(reduce_angle(th1 - th2)));
      const auto roots = restricted_third_positions(m1, m2, th1, th2, sp.s, sp.omega2);
      all = all && std::any_of(roots.begin(), roots.end(), [&](double r) {
              return std::abs(reduce_angle(r - th3)) < 1e-8;
            });
    }
    restricted_ok += all;
  }
  report(10, "negative results", lagrange == 0 && equator == 0 && sweep_ok && restricted_ok == 20,
         std::to_string(lagrange) + " independent Lagrange and " + std::to_string(equator) +
             " independent equator shapes; two-body sweep " +
             (sweep_ok ? "fails only at pi/2" : "WRONG") + "; restricted roots contain the shapes for " +
             std::to_string(restricted_ok) + "/20 pairs");
}

// 11. RK4 conservation and its order.
void integrator() {
  Stopwatch sw;
  auto rng = sample::make_rng(1011);
  const double dt = 1e-3;
  const std::size_t steps = 100000;
  double e1 = 0, l1 = 0, e2 = 0, l2 = 0;
  for (int n = 0; n < 10;) {
    const MassTriple m = sample::random_masses(rng, 0.5, 2.0);
    const auto drawn = sample::random_regular_state(rng, m, dt, steps);
    if (!drawn) continue;
    ++n;
    const DynState& s = *drawn;
    IntegrateOptions opt;
    opt.sample_every = steps;
    const TrajectoryReport a = integrate(m, s, dt, steps, opt);
    opt.sample_every = 2 * steps;
    const TrajectoryReport b = integrate(m, s, dt / 2, 2 * steps, opt);
    e1 = std::max(e1, a.energy_drift_rel);
    l1 = std::max(l1, a.lz_drift_rel);
    e2 = std::max(e2, b.energy_drift_rel);
    l2 = std::max(l2, b.lz_drift_rel);
  }
  const double re = e1 / e2, rl = l1 / l2;
  report(11, "integrator quality", e1 < 1e-8 && l1 < 1e-8 && re >= 8 && rl >= 8,
         "energy drift " + fmt("%.1e", e1) + ", Lz drift " + fmt("%.1e", l1) +
             "; halving dt: energy x" + fmt("%.1f", re) + ", Lz x" + fmt("%.1f", rl) + " in " +
             fmt("%.1f", sw.seconds()) + " s");
}

}  // namespace

int main() {
  closed_form_roots();
  mass_independence();
  spin_constants();
  normalization();
  uniqueness();
  equal_mass_factorization();
  saddle();
  azero();
  continuation();
  negative_results();
  integrator();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
