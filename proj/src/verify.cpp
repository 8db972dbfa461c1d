#include "twophase/verify.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "twophase/errors.hpp"
#include "twophase/evolution.hpp"
#include "twophase/fit.hpp"
#include "twophase/inequality.hpp"
#include "twophase/spectrum.hpp"

namespace twophase {

bool VerifyReport::all_passed() const noexcept {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

PropertyResult eigen_invariants(std::mt19937_64& rng, int samples) {
  PropertyResult r{"eigen_invariants", true, 0, 0.0, 1e-9, ""};
  for (int i = 0; i < samples; ++i) {
    const RandomModel m = random_model(rng);
    const SpectrumReport s = eigen_spectrum(m.params, m.far);
    r.worst = std::max({r.worst, s.residuals.sum, s.residuals.product, s.residuals.pairwise});
    ++r.cases;
  }
  r.passed = r.worst <= r.tolerance;
  return r;
}

bool pattern_holds(const SpectrumReport& s) {
  const auto& l = s.lambda;
  switch (s.regime.tag) {
    case Regime::Supersonic: return l[0].real() > 0 && l[1].real() > 0 && l[2].real() < 0;
    case Regime::Subsonic: return l[0].real() < 0 && l[1].real() < 0 && l[2].real() > 0;
    case Regime::Sonic: return l[0].real() > 0 && l[1].real() < 0 && std::abs(l[2]) <= 1e-12;
  }
  return false;
}

PropertyResult regime_table() {
  PropertyResult r{"regime_sign_table", true, 0, 0.0, 1e-12, ""};
  const ModelParams unit(1, 1, 1, 1, 1);
  const struct {
    double u_plus;
    Regime expect;
  } cases[] = {{2.0, Regime::Supersonic}, {0.5, Regime::Subsonic}, {1.0, Regime::Sonic}};
  for (const auto& c : cases) {
    ++r.cases;
    const FarFieldData far = complete_far_field(unit, 1.0, 1.0, c.u_plus, c.u_plus);
    try {
      const SpectrumReport s = eigen_spectrum(unit, far);
      if (s.regime.tag != c.expect || !pattern_holds(s)) {
        r.passed = false;
        r.detail += fmt::format("u+={} wrong pattern; ", c.u_plus);
      }
      if (c.expect == Regime::Sonic) {
        const double e = std::max({std::abs(s.lambda[0] - std::sqrt(2.0)), std::abs(s.lambda[1] + std::sqrt(2.0)),
                                   std::abs(s.lambda[2])});
        r.worst = std::max(r.worst, e);
      }
    } catch (const StructuralError& e) {
      r.passed = false;
      r.detail += e.what();
    }
  }
  r.passed = r.passed && r.worst <= r.tolerance;
  return r;
}

PropertyResult inequalities(std::mt19937_64& rng, int functions) {
  PropertyResult r{"weighted_inequalities", true, 0, 0.0, 1.0, ""};
  const std::size_t n = 4001;
  const double L = 200.0;
  std::vector<double> x(n), psi(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = L * static_cast<double>(i) / static_cast<double>(n - 1);
  int violations = 0;
  for (int f = 0; f < functions; ++f) {
    double a[4], b[4], w[4], ph[4];
    for (int k = 0; k < 4; ++k) {
      a[k] = uniform(rng, -1.0, 1.0);
      b[k] = uniform(rng, 0.05, 1.0);
      w[k] = uniform(rng, 0.0, 3.0);
      ph[k] = uniform(rng, 0.0, 6.283185307179586);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a[k] * std::exp(-b[k] * x[i]) * std::cos(w[k] * x[i] + ph[k]);
      psi[i] = s;
    }
    const double c0 = uniform(rng, 0.1, 3.0);
    const double delta = std::exp(uniform(rng, std::log(1e-3), std::log(0.5)));
    const InequalityReport rep = weighted_inequality_check(psi, x, c0, delta, 3);
    r.worst = std::max({r.worst, rep.exponential.ratio, rep.algebraic.ratio});
    if (!rep.exponential.holds || !rep.algebraic.holds) ++violations;
    ++r.cases;
  }
  r.passed = violations == 0;
  r.detail = fmt::format("{} violations", violations);
  return r;
}

PropertyResult entropy_closed_form(std::mt19937_64& rng) {
  PropertyResult r{"relative_entropy_closed_form", true, 0, 0.0, 1e-10, ""};
  for (int i = 0; i < 200; ++i) {
    const double e = i % 4 == 0 ? 1.0 : uniform(rng, 1.0, 3.0);
    const double A = uniform(rng, 0.2, 5.0);
    const double ref = uniform(rng, 0.2, 5.0);
    const double rho = ref * std::exp(uniform(rng, -1.0, 1.0));
    const double closed = relative_entropy(A, e, ref, rho);
    const double quad = relative_entropy_quadrature(A, e, ref, rho);
    const double rel = std::abs(closed - quad) / std::max(std::abs(quad), 1e-300);
    r.worst = std::max(r.worst, rel);
    if (!(closed > 0.0)) r.passed = false;
    ++r.cases;
  }
  r.passed = r.passed && r.worst <= r.tolerance;
  return r;
}

PropertyResult fit_equivariance(std::mt19937_64& rng) {
  PropertyResult r{"fit_scale_equivariance", true, 0, 0.0, 1e-10, ""};
  std::vector<double> x(200), y(200), ys(200), ya(200), yas(200);
  for (int t = 0; t < 20; ++t) {
    const double rate = uniform(rng, 0.1, 3.0);
    const double lambda = std::exp(uniform(rng, -10.0, 10.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = 0.05 * static_cast<double>(i);
      y[i] = std::exp(-rate * x[i]) * (1.0 + 0.01 * std::sin(x[i]));
      ys[i] = lambda * y[i];
      ya[i] = 1.0 / (1.0 + rate * x[i]);
      yas[i] = lambda * ya[i];
    }
    const Window w{x.front(), x.back()};
    const double e1 = fit_exponential_tail(x, y, w).rate_or_slope;
    const double e2 = fit_exponential_tail(x, ys, w).rate_or_slope;
    const double a1 = fit_algebraic_tail(x, ya, w, rate).loglog_exponent;
    const double a2 = fit_algebraic_tail(x, yas, w, rate).loglog_exponent;
    r.worst = std::max({r.worst, std::abs(e1 - e2) / std::abs(e1), std::abs(a1 - a2) / std::abs(a1)});
    ++r.cases;
  }
  r.passed = r.worst <= r.tolerance;
  return r;
}

PropertyResult well_balanced(const RunConfig& cfg) {
  PropertyResult r{"well_balanced_constant_state", true, 1, 0.0, 1e-12, ""};
  const FarFieldData& f = cfg.far;
  const FarFieldData flat = complete_far_field(cfg.params, f.rho_plus(), f.n_plus(), f.u_plus(), f.u_plus());
  GridSpec g;
  g.nodes = 256;
  g.length = 50.0;
  const StationaryProfile p = solve_stationary(cfg.params, flat, g);
  const InflowData in = inflow_data(flat);
  const EvolutionState s0 = init_state(p, {}, in);
  const RunResult res = run(s0, cfg.params, p, in, 1.0, 0.5);
  double scale = 0.0, dev = 0.0;
  const auto& s1 = res.final_state;
  for (std::size_t i = 0; i < s0.size(); ++i) {
    scale = std::max({scale, std::abs(s0.rho[i]), std::abs(s0.u[i]), std::abs(s0.n[i]), std::abs(s0.v[i])});
    dev = std::max({dev, std::abs(s1.rho[i] - s0.rho[i]), std::abs(s1.u[i] - s0.u[i]), std::abs(s1.n[i] - s0.n[i]),
                    std::abs(s1.v[i] - s0.v[i])});
  }
  r.worst = dev / scale;
  r.passed = r.worst <= r.tolerance;
  return r;
}

}  // namespace

RandomModel random_model(std::mt19937_64& rng, double sonic_gap) {
  for (;;) {
    const ModelParams p(uniform(rng, 0.2, 5.0), uniform(rng, 0.2, 5.0), uniform(rng, 1.0, 3.0), uniform(rng, 1.0, 3.0),
                        uniform(rng, 0.2, 5.0));
    const double u = uniform(rng, 0.1, 5.0);
    const FarFieldData far = complete_far_field(p, uniform(rng, 0.2, 5.0), uniform(rng, 0.2, 5.0), u, u);
    if (std::abs(mach_number(p, far) - 1.0) > sonic_gap) return {p, far};
  }
}

VerifyReport run_property_suite(const RunConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  VerifyReport rep;
  rep.properties.push_back(eigen_invariants(rng, cfg.verify.samples));
  rep.properties.push_back(regime_table());
  rep.properties.push_back(inequalities(rng, cfg.verify.functions));
  rep.properties.push_back(entropy_closed_form(rng));
  rep.properties.push_back(fit_equivariance(rng));
  rep.properties.push_back(well_balanced(cfg));
  return rep;
}

}  // namespace twophase
