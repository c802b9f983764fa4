#include "s2re/azero.hpp"

#include <algorithm>
#include <cmath>

namespace s2re {

bool triangle_inequality(const MassTriple& m) {
  const double m1 = m.m1(), m2 = m.m2(), m3 = m.m3();
  return m1 + m2 > m3 && m2 + m3 > m1 && m3 + m1 > m2;
}

AZeroSolutionSet azero_solutions(const MassTriple& m) {
  AZeroSolutionSet out;
  if (!triangle_inequality(m)) {
    const double m1 = m.m1(), m2 = m.m2(), m3 = m.m3();
    out.degenerate = m1 + m2 == m3 || m2 + m3 == m1 || m3 + m1 == m2;
    return out;
  }
  const double m1 = m.m1(), m2 = m.m2(), m3 = m.m3();
  // arccos sqrt(x) loses digits near x = 1; use the factored numerators of
  // cos^2 and sin^2 (common denominator 4 m_j m_k) with atan2 instead.
  const double total = m1 + m2 + m3;
  const double d1 = total - 2.0 * m1, d2 = total - 2.0 * m2, d3 = total - 2.0 * m3;
  out.alpha1 = std::atan2(std::sqrt(std::max(d1 * total, 0.0)), std::sqrt(std::max(d2 * d3, 0.0)));
  out.alpha2 = std::atan2(std::sqrt(std::max(d2 * total, 0.0)), std::sqrt(std::max(d3 * d1, 0.0)));

  const double a1 = out.alpha1, a2 = out.alpha2;
  const double candidates[4][2] = {
      {-kPi + a1, a2}, {-a1, kPi - a2}, {a1, a2}, {kPi - a1, kPi - a2}};
  for (const auto& c : candidates) {
    if (!in_uphys(c[0], c[1])) {
      // Numerically on the triangle equality: the shapes collapse onto
      // singular lines.
      out.solutions.clear();
      out.degenerate = true;
      return out;
    }
    out.solutions.emplace_back(c[0], c[1]);
  }
  return out;
}

}  // namespace s2re
