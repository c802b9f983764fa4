// The exceptional set A = 0 of meridian shapes: the three mass-weighted
// double-angle unit vectors close into a triangle.
#pragma once

#include <vector>

#include "s2re/core.hpp"

namespace s2re {

/// m_i + m_j > m_k strictly for all three k.
bool triangle_inequality(const MassTriple& m);

struct AZeroSolutionSet {
  /// Empty or four shapes: (-pi+a1, a2), (-a1, pi-a2), (a1, a2), (pi-a1, pi-a2).
  std::vector<MeridianShape> solutions;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  /// Masses on (or numerically at) the triangle equality; no shape in U_phys.
  bool degenerate = false;
};

/// alpha1 = arccos sqrt((m1^2 - (m2-m3)^2) / (4 m2 m3)),
/// alpha2 = arccos sqrt((m2^2 - (m3-m1)^2) / (4 m3 m1)).
AZeroSolutionSet azero_solutions(const MassTriple& m);

}  // namespace s2re
