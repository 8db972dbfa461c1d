#include "twophase/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "twophase/errors.hpp"
#include "twophase/quadrature.hpp"

namespace twophase {

namespace {

InequalitySide compare(double lhs, double rhs, double constant) {
  InequalitySide s;
  s.lhs = lhs;
  s.rhs = rhs;
  s.constant = constant;
  const double bound = constant * rhs;
  s.ratio = bound > 0.0 ? lhs / bound : (lhs > 0.0 ? INFINITY : 0.0);
  s.holds = lhs <= bound;
  return s;
}

}  // namespace

InequalityReport weighted_inequality_check(std::span<const double> psi, std::span<const double> x,
                                           double c0, double delta, int j) {
  if (psi.size() != x.size() || psi.size() < 3) throw UsageError("inequality check: bad grid");
  if (!(c0 > 0.0) || !(delta > 0.0) || j <= 2) throw DomainError("inequality check: need c0 > 0, delta > 0, j > 2");
  const double h = x[1] - x[0];
  const std::size_t n = psi.size();

  const std::vector<double> dpsi = gradient_uniform(psi, h);
  std::vector<double> dsq(n), wexp(n), walg(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p2 = psi[i] * psi[i];
    dsq[i] = dpsi[i] * dpsi[i];
    wexp[i] = std::exp(-c0 * x[i]) * p2;
    walg[i] = std::pow(delta / (1.0 + delta * x[i]), j) * p2;
  }
  const double boundary = psi[0] * psi[0] + integrate_uniform(dsq, h);

  InequalityReport rep;
  rep.j = j;
  rep.exponential = compare(delta * integrate_uniform(wexp, h), delta * boundary,
                            std::max(2.0 / c0, 2.0 / (c0 * c0)));
  const double jj = static_cast<double>(j);
  const double c_alg = std::max(2.0, 2.0 * std::max(delta / (jj - 1.0), 1.0 / ((jj - 1.0) * (jj - 2.0))));
  rep.algebraic = compare(integrate_uniform(walg, h), std::pow(delta, jj - 2.0) * boundary, c_alg);
  return rep;
}

}  // namespace twophase
