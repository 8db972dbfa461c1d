#include "twophase/decay.hpp"

#include <algorithm>
#include <cmath>

#include "twophase/errors.hpp"

namespace twophase {

DecayReport decay_report(const StationaryProfile& profile, const SpectrumReport& spectrum, double delta) {
  DecayReport rep;
  rep.regime = profile.solver;
  rep.delta = delta;
  if (profile.trivial() || delta == 0.0) {
    rep.trivial = true;
    rep.warnings.push_back("trivial profile: decay rates undefined");
    return rep;
  }

  const std::size_t n = profile.size();
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = std::abs(profile.du[j]) + std::abs(profile.dv[j]);
  const Window w = default_tail_window(profile.x, y, &rep.warnings);
  rep.exponential = fit_exponential_tail(profile.x, y, w);
  rep.algebraic = fit_algebraic_tail(profile.x, y, w, delta);
  rep.selected =
      rep.exponential.r_squared >= rep.algebraic.r_squared ? FitModel::Exponential : FitModel::Algebraic;

  if (profile.solver != Regime::Sonic) {
    rep.expected = spectrum.slowest_stable_rate();
    rep.fitted = rep.exponential.rate_or_slope;
    rep.relative_error = std::abs(rep.fitted - rep.expected) / rep.expected;
    rep.rate_ok = rep.relative_error <= 0.05;
    for (std::size_t j = 0; j < n; ++j) {
      const double bound = delta * std::exp(-rep.expected * profile.x[j]);
      if (bound > 0.0) rep.amplitude_bound = std::max(rep.amplitude_bound, y[j] / bound);
    }
    return rep;
  }

  const CVec3& l3 = spectrum.left[2];
  std::vector<double> z3(n), du(n);
  for (std::size_t j = 0; j < n; ++j) {
    z3[j] = std::abs((l3[0] * profile.du[j] + l3[1] * profile.ux[j] + l3[2] * profile.dv[j]).real());
    du[j] = std::abs(profile.du[j]);
  }
  if (!profile.center) throw UsageError("sonic decay report needs the center-manifold coefficient");
  rep.center = fit_algebraic_tail(profile.x, z3, w, delta);
  rep.expected = profile.center->a;
  rep.fitted = rep.center.rate_or_slope;
  rep.relative_error = std::abs(rep.fitted - rep.expected) / rep.expected;
  rep.rate_ok = rep.relative_error <= 0.10;
  rep.loglog_exponent = fit_algebraic_tail(profile.x, du, w, delta).loglog_exponent;
  rep.exponent_ok = std::abs(rep.loglog_exponent + 1.0) <= 0.10;
  for (std::size_t j = 0; j < n; ++j) {
    const double bound = delta / (1.0 + delta * profile.x[j]);
    rep.amplitude_bound = std::max(rep.amplitude_bound, y[j] / bound);
  }
  return rep;
}

SweepResult boundary_slope_sweep(const ModelParams& params, const FarFieldData& base,
                                 const std::vector<double>& deltas, const GridSpec& grid) {
  SweepResult out;
  const double up = base.u_plus();
  const double sign = base.offset() > 0.0 ? 1.0 : -1.0;
  std::vector<double> xs, ys;
  for (double d : deltas) {
    SweepRow row;
    row.delta = d;
    try {
      if (!(d >= 0.0)) throw DomainError("sweep delta must be nonnegative");
      const double um = up + sign * d;
      const FarFieldData far = complete_far_field(params, base.rho_plus() * up / um,
                                                  base.n_plus() * up / um, um, up);
      const StationaryProfile p = solve_stationary(params, far, grid);
      row.ux0 = std::abs(p.ux.front());
      row.vx0 = std::abs(p.vx.front());
      row.ok = true;
      if (d > 0.0) {
        xs.push_back(d);
        ys.push_back(row.ux0);
        out.max_ratio = std::max(out.max_ratio, row.ux0 / d);
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  if (xs.size() >= 2) {
    try {
      out.fit = fit_power_law(xs, ys);
      out.fit_valid = true;
    } catch (const std::exception&) {
      out.fit_valid = false;
    }
  }
  return out;
}

}  // namespace twophase
