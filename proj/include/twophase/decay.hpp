#pragma once

#include <string>
#include <vector>

#include "twophase/fit.hpp"
#include "twophase/stationary.hpp"

namespace twophase {

struct DecayReport {
  bool trivial = false;
  Regime regime = Regime::Sonic;
  double delta = 0.0;

  /// Both tail models fitted to |u - u+| + |v - u+| on the same window.
  FitResult exponential{};
  FitResult algebraic{};
  FitModel selected = FitModel::Exponential;

  /// Away from sonic: expected rate min |Re lambda_stable| and the relative
  /// error of the fitted rate. At sonic: expected slope a, the slope fitted
  /// to 1/|z3|, and the log-log exponent of |u - u+| against 1 + delta x.
  double expected = 0.0;
  double fitted = 0.0;
  double relative_error = 0.0;
  bool rate_ok = false;
  FitResult center{};
  double loglog_exponent = 0.0;
  bool exponent_ok = false;

  /// Smallest C with |u - u+| + |v - u+| <= C delta e^{-m x} (or
  /// C delta / (1 + delta x) at sonic) on the whole grid.
  double amplitude_bound = 0.0;

  std::vector<std::string> warnings;
};

/// Tail analysis of a converged profile. The rate tolerance is 5% away from
/// sonic and 10% at sonic (slope and exponent).
DecayReport decay_report(const StationaryProfile& profile, const SpectrumReport& spectrum, double delta);

struct SweepRow {
  double delta = 0.0;
  double ux0 = 0.0;  ///< |u_x(0)|
  double vx0 = 0.0;  ///< |v_x(0)|
  bool ok = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Log-log fit of |u_x(0)| against delta over the successful nonzero rows.
  FitResult fit{};
  bool fit_valid = false;
  /// max |u_x(0)| / delta over the successful nonzero rows.
  double max_ratio = 0.0;
};

/// Solves the stationary problem for each delta with the far state of `base`
/// held fixed and u- = u+ - delta (or u+ + delta when base has u- > u+).
/// Failing rows carry their error message instead of throwing.
SweepResult boundary_slope_sweep(const ModelParams& params, const FarFieldData& base,
                                 const std::vector<double>& deltas, const GridSpec& grid = {});

}  // namespace twophase
