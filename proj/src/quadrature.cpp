#include "twophase/quadrature.hpp"

#include <cmath>

namespace twophase {

double integrate_uniform(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
  std::size_t simpson_end = intervals;  // last node index covered by Simpson
  double tail = 0.0;
  if (intervals % 2 == 1) {
    simpson_end = intervals - 3;
    const std::size_t k = simpson_end;
    tail = 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
  }
  double s = 0.0;
  if (simpson_end > 0) {
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < simpson_end; i += 2) odd += f[i];
    for (std::size_t i = 2; i < simpson_end; i += 2) even += f[i];
    s = h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[simpson_end]);
  }
  return s + tail;
}

std::vector<double> gradient_uniform(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> g(n, 0.0);
  if (n < 3) {
    if (n == 2) g[0] = g[1] = (f[1] - f[0]) / h;
    return g;
  }
  g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  g[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return g;
}

std::vector<double> gradient_uniform4(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 5) return gradient_uniform(f, h);
  std::vector<double> g(n);
  const double s = 1.0 / (12.0 * h);
  g[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  g[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i) g[i] = s * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  g[n - 2] = s * (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]);
  g[n - 1] = s * (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]);
  return g;
}

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace twophase
