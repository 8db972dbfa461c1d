#include "twophase/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twophase/errors.hpp"

namespace twophase {

namespace {

constexpr std::size_t kMinPoints = 8;

struct Selection {
  std::vector<double> x, y;
};

Selection select(std::span<const double> x, std::span<const double> y, Window w) {
  if (x.size() != y.size()) throw UsageError("fit: x and y differ in length");
  Selection s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= w.lo && x[i] <= w.hi) {
      s.x.push_back(x[i]);
      s.y.push_back(y[i]);
    }
  }
  if (s.x.size() < kMinPoints) {
    throw InsufficientData("fit window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) +
                           "] holds " + std::to_string(s.x.size()) + " points, need 8");
  }
  for (double v : s.y)
    if (!(v > 0.0)) throw DomainError("fit: y must be positive on the window");
  return s;
}

}  // namespace

std::string_view to_string(FitModel m) noexcept {
  switch (m) {
    case FitModel::Exponential: return "exponential";
    case FitModel::Algebraic: return "algebraic";
    case FitModel::Power: return "power";
  }
  return "unknown";
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  LineFit f;
  if (n < 2) {
    f.degenerate = true;
    return f;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    f.degenerate = true;
    f.intercept = my;
    return f;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy <= std::numeric_limits<double>::min() * static_cast<double>(n) ||
      syy <= 1e-28 * my * my * static_cast<double>(n)) {
    // No variation in y: the constant model fits exactly.
    f.r_squared = 1.0;
    f.degenerate = true;
    f.slope = 0.0;
    f.intercept = my;
    return f;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  return f;
}

Window default_tail_window(std::span<const double> x, std::span<const double> y,
                           std::vector<std::string>* warnings) {
  if (x.empty() || x.size() != y.size()) throw UsageError("tail window: empty or mismatched data");
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * ymax;
  const double x0 = x.front(), x1 = x.back();
  Window w{x0 + 0.4 * (x1 - x0), x1};

  double last_above = x0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(y[i]) >= floor) {
      last_above = std::max(last_above, x[i]);
      if (x[i] >= w.lo) ++count;
    }
  }
  w.hi = std::min(w.hi, last_above);
  if (count >= kMinPoints && w.hi > w.lo) return w;

  w = Window{x0 + 0.4 * (last_above - x0), last_above};
  if (warnings) {
    warnings->push_back("tail window shrunk to [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) +
                        "]: values below the numerical floor");
  }
  return w;
}

FitResult fit_exponential_tail(std::span<const double> x, std::span<const double> y, Window window) {
  Selection s = select(x, y, window);
  std::vector<double> ly(s.y.size());
  for (std::size_t i = 0; i < ly.size(); ++i) ly[i] = std::log(s.y[i]);
  const LineFit f = least_squares(s.x, ly);
  FitResult r;
  r.model = FitModel::Exponential;
  r.rate_or_slope = f.slope == 0.0 ? 0.0 : -f.slope;
  r.intercept = f.intercept;
  r.r_squared = f.r_squared;
  r.window = window;
  r.points = s.x.size();
  r.low_confidence = f.degenerate;
  return r;
}

FitResult fit_algebraic_tail(std::span<const double> x, std::span<const double> y, Window window,
                             double delta) {
  Selection s = select(x, y, window);
  std::vector<double> inv(s.y.size()), lx(s.y.size()), ly(s.y.size());
  for (std::size_t i = 0; i < inv.size(); ++i) {
    inv[i] = 1.0 / s.y[i];
    lx[i] = std::log1p(delta * s.x[i]);
    ly[i] = std::log(s.y[i]);
  }
  const LineFit f = least_squares(s.x, inv);
  const LineFit g = least_squares(lx, ly);
  FitResult r;
  r.model = FitModel::Algebraic;
  r.rate_or_slope = f.slope;
  r.intercept = f.intercept;
  r.r_squared = f.r_squared;
  r.window = window;
  r.points = s.x.size();
  r.loglog_exponent = g.slope;
  r.loglog_r_squared = g.r_squared;
  r.low_confidence = f.degenerate || g.degenerate;
  return r;
}

FitResult fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InsufficientData("power-law fit needs two points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("power-law fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const LineFit f = least_squares(lx, ly);
  FitResult r;
  r.model = FitModel::Power;
  r.rate_or_slope = f.slope;
  r.intercept = f.intercept;
  r.r_squared = f.r_squared;
  r.window = {*std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end())};
  r.points = x.size();
  r.low_confidence = f.degenerate || x.size() < 3;
  return r;
}

}  // namespace twophase
