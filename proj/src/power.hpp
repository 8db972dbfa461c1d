#pragma once

#include <cmath>

namespace twophase::detail {

// Integer exponents dominate in practice; skip std::pow for them.
inline double power(double x, double e) noexcept {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.0) return 1.0;
  if (e == 3.0) return x * x * x;
  return std::pow(x, e);
}

/// (1 + s)^(-e) - 1 without cancellation for small s.
inline double inverse_power_m1(double s, double e) noexcept {
  return std::expm1(-e * std::log1p(s));
}

}  // namespace twophase::detail
