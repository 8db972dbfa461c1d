#pragma once

#include <span>

namespace twophase {

/// One side-by-side evaluation of a weighted Poincare-type bound
///   lhs <= constant * rhs.
struct InequalitySide {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  /// lhs / (constant * rhs); 0 when both sides vanish.
  double ratio = 0.0;
  bool holds = true;
};

struct InequalityReport {
  /// delta int e^{-c0 x} psi^2 <= C delta (psi(0)^2 + |psi_x|^2),
  /// C = max(2/c0, 2/c0^2).
  InequalitySide exponential;
  /// int delta^j/(1+delta x)^j psi^2 <= C delta^{j-2} (psi(0)^2 + |psi_x|^2),
  /// C = max(2, 2 max(delta/(j-1), 1/((j-1)(j-2)))).
  InequalitySide algebraic;
  int j = 3;
};

/// Evaluates both weighted inequalities for a grid function psi on a uniform
/// grid x (x[0] = 0). Integrals use the composite Simpson rule and psi_x the
/// second-order centered gradient. Requires c0 > 0, delta > 0, j > 2.
InequalityReport weighted_inequality_check(std::span<const double> psi, std::span<const double> x,
                                           double c0, double delta, int j = 3);

}  // namespace twophase
