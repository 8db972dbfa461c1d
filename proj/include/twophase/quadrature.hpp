#pragma once

#include <functional>
#include <span>
#include <vector>

namespace twophase {

/// Composite Simpson rule on a uniform grid with spacing h. An odd number of
/// intervals closes with Simpson's 3/8 rule on the last three; two nodes fall
/// back to the trapezoid.
double integrate_uniform(std::span<const double> f, double h);

/// Second-order centered derivative on a uniform grid, one-sided
/// second-order stencils at both ends.
std::vector<double> gradient_uniform(std::span<const double> f, double h);

/// Fourth-order variant: five-point centered stencil inside, one-sided
/// five-point stencils on the two nodes at each end. Needs at least 5 nodes.
std::vector<double> gradient_uniform4(std::span<const double> f, double h);

/// Adaptive Simpson quadrature with Richardson correction; tol is an
/// absolute error target.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-13, int max_depth = 50);

}  // namespace twophase
