#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace twophase {

/// Embedded Runge-Kutta 5(4) pair of Dormand and Prince with the
/// Hairer-Wanner fourth-order continuous extension. Integrates forward or
/// backward in x. By default the error of a step is measured norm-wise:
///   err = max_i |e_i| / (atol + rtol * max(|y|_inf, |y_new|_inf))
/// so that components sitting at zero do not force absolute accuracy. With
/// componentwise = true each component is scaled by its own magnitude.
template <std::size_t D>
class Dopri5 {
 public:
  using State = std::array<double, D>;

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 0.0;  ///< 0 selects a step from the local scale
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 2'000'000;
    bool dense = true;
    bool componentwise = false;
    /// Per-component absolute tolerances for componentwise control; zero
    /// entries fall back to atol.
    State atol_each{};
  };

  struct Stats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
  };

  /// Piecewise quartic interpolant of an accepted trajectory.
  class Dense {
   public:
    bool empty() const noexcept { return steps_.empty(); }
    double front() const noexcept { return steps_.front().x0; }
    double back() const noexcept { return steps_.back().x0 + steps_.back().h; }

    State operator()(double x) const {
      if (steps_.empty()) throw std::logic_error("empty dense output");
      // Steps are stored in integration order; locate by the covered range.
      const bool forward = steps_.front().h > 0.0;
      auto it = std::lower_bound(steps_.begin(), steps_.end(), x, [forward](const Piece& p, double v) {
        const double end = p.x0 + p.h;
        return forward ? end < v : end > v;
      });
      if (it == steps_.end()) --it;
      const Piece& p = *it;
      const double theta = (x - p.x0) / p.h;
      const double theta1 = 1.0 - theta;
      State y;
      for (std::size_t i = 0; i < D; ++i) {
        y[i] = p.r[0][i] +
               theta * (p.r[1][i] + theta1 * (p.r[2][i] + theta * (p.r[3][i] + theta1 * p.r[4][i])));
      }
      return y;
    }

   private:
    friend class Dopri5;
    struct Piece {
      double x0, h;
      std::array<State, 5> r;
    };
    std::vector<Piece> steps_;
  };

  struct Result {
    State y{};
    double x = 0.0;
    Stats stats{};
    Dense dense{};
  };

  /// f(x, y, dydx) evaluates the right-hand side. Throws std::runtime_error
  /// when the step budget is exhausted or the step size underflows.
  template <class F>
  static Result integrate(F&& f, double x0, const State& y0, double x1, const Options& opt = {}) {
    Result res;
    res.y = y0;
    res.x = x0;
    if (x1 == x0) return res;
    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);

    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;
    double x = x0;
    State y = y0;
    f(x, y, k1);
    ++res.stats.evaluations;

    double h = opt.initial_step > 0.0 ? opt.initial_step : initial_step(f, x, y, k1, dir, opt, res.stats);
    h = std::min({h, opt.max_step, span});
    double err_old = 1e-4;
    bool last_rejected = false;

    for (long n = 0;; ++n) {
      if (n >= opt.max_steps) throw std::runtime_error("Dopri5: step budget exhausted");
      bool last = false;
      if ((x + dir * h - x1) * dir >= 0.0) {
        h = std::abs(x1 - x);
        last = true;
      }
      const double hs = dir * h;
      if (x + hs == x) throw std::runtime_error("Dopri5: step size underflow");

      for (std::size_t i = 0; i < D; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
      f(x + c2 * hs, ytmp, k2);
      for (std::size_t i = 0; i < D; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      f(x + c3 * hs, ytmp, k3);
      for (std::size_t i = 0; i < D; ++i) ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      f(x + c4 * hs, ytmp, k4);
      for (std::size_t i = 0; i < D; ++i)
        ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      f(x + c5 * hs, ytmp, k5);
      for (std::size_t i = 0; i < D; ++i)
        ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      f(x + hs, ytmp, k6);
      for (std::size_t i = 0; i < D; ++i)
        ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      f(x + hs, ynew, k7);
      res.stats.evaluations += 6;

      double ymax = 0.0, ynmax = 0.0, emax = 0.0, err = 0.0;
      for (std::size_t i = 0; i < D; ++i) {
        yerr[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        ymax = std::max(ymax, std::abs(y[i]));
        ynmax = std::max(ynmax, std::abs(ynew[i]));
        emax = std::max(emax, std::abs(yerr[i]));
        if (opt.componentwise) {
          const double a = opt.atol_each[i] > 0.0 ? opt.atol_each[i] : opt.atol;
          const double ski = a + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
          err = std::max(err, std::abs(yerr[i]) / ski);
        }
      }
      if (!opt.componentwise) err = emax / (opt.atol + opt.rtol * std::max(ymax, ynmax));
      if (!std::isfinite(err)) {
        h *= 0.25;
        last_rejected = true;
        ++res.stats.rejected;
        continue;
      }

      // PI step-size control as in DOPRI5 (beta = 0.04).
      const double fac11 = std::pow(err, 0.2 - 0.04 * 0.75);
      double fac = fac11 / std::pow(err_old, 0.04) / 0.9;
      fac = std::clamp(fac, 0.1, 5.0);
      double hnew = h / fac;

      if (err <= 1.0) {
        err_old = std::max(err, 1e-4);
        ++res.stats.accepted;
        if (opt.dense) {
          typename Dense::Piece p;
          p.x0 = x;
          p.h = hs;
          for (std::size_t i = 0; i < D; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = hs * k1[i] - ydiff;
            p.r[0][i] = y[i];
            p.r[1][i] = ydiff;
            p.r[2][i] = bspl;
            p.r[3][i] = ydiff - hs * k7[i] - bspl;
            p.r[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
          }
          res.dense.steps_.push_back(p);
        }
        k1 = k7;
        y = ynew;
        x = last ? x1 : x + hs;
        if (last) break;
        hnew = std::min(hnew, opt.max_step);
        if (last_rejected) hnew = std::min(hnew, h);
        last_rejected = false;
        h = hnew;
      } else {
        h /= std::min(fac11 / 0.9, 5.0);
        last_rejected = true;
        ++res.stats.rejected;
      }
    }
    res.y = y;
    res.x = x;
    return res;
  }

 private:
  template <class F>
  static double initial_step(F& f, double x, const State& y, const State& k1, double dir,
                             const Options& opt, Stats& stats) {
    double ny = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      ny = std::max(ny, std::abs(y[i]));
      nf = std::max(nf, std::abs(k1[i]));
    }
    const double sk = opt.atol + opt.rtol * ny;
    double h = (nf <= 1e-10 * sk || ny == 0.0) ? 1e-6 : 0.01 * (sk / opt.rtol) / nf;
    h = std::min(h, opt.max_step);
    State y1, k2;
    for (std::size_t i = 0; i < D; ++i) y1[i] = y[i] + dir * h * k1[i];
    f(x + dir * h, y1, k2);
    ++stats.evaluations;
    double d2 = 0.0;
    for (std::size_t i = 0; i < D; ++i) d2 = std::max(d2, std::abs(k2[i] - k1[i]) / sk);
    d2 /= h;
    const double der = std::max(d2, nf / sk);
    const double h1 = der <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der, 0.2);
    return std::min(100.0 * h, h1);
  }

  static constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
  static constexpr double a21 = 0.2;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                          a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

}  // namespace twophase
