#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twophase {

enum class FitModel { Exponential, Algebraic, Power };

std::string_view to_string(FitModel m) noexcept;

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

struct FitResult {
  FitModel model = FitModel::Exponential;
  /// Exponential: decay rate (-slope of ln y). Algebraic: slope of 1/y.
  /// Power: exponent of y = C x^p.
  double rate_or_slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  Window window{};
  std::size_t points = 0;
  /// Algebraic only: exponent p of y ~ (1 + delta x)^p from a log-log fit.
  double loglog_exponent = 0.0;
  double loglog_r_squared = 0.0;
  /// Set when the data carry no trend (constant y) or the window is tiny.
  bool low_confidence = false;
};

struct LineFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
  bool degenerate = false;
};

/// Ordinary least squares y = intercept + slope x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Trailing 60% of the abscissa range, restricted to points with
/// y >= 1e3 eps max|y|. If fewer than 8 points survive, falls back to the
/// trailing 60% of the above-floor extent and appends a warning.
Window default_tail_window(std::span<const double> x, std::span<const double> y,
                           std::vector<std::string>* warnings = nullptr);

/// Least-squares line on (x, ln y) over the window; rate = -slope.
/// Throws InsufficientData with fewer than 8 points, DomainError if y <= 0.
FitResult fit_exponential_tail(std::span<const double> x, std::span<const double> y, Window window);

/// Least-squares line on (x, 1/y) over the window, plus the log-log exponent
/// of y against (1 + delta x).
FitResult fit_algebraic_tail(std::span<const double> x, std::span<const double> y, Window window,
                             double delta = 1.0);

/// Least-squares line on (ln x, ln y); x > 0, y > 0.
FitResult fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace twophase
