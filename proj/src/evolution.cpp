#include "twophase/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "power.hpp"
#include "twophase/errors.hpp"
#include "twophase/quadrature.hpp"

namespace twophase {

std::string_view to_string(Field f) noexcept {
  switch (f) {
    case Field::Rho: return "rho";
    case Field::U: return "u";
    case Field::N: return "n";
    case Field::V: return "v";
  }
  return "?";
}

Field parse_field(std::string_view name) {
  if (name == "rho") return Field::Rho;
  if (name == "u") return Field::U;
  if (name == "n") return Field::N;
  if (name == "v") return Field::V;
  throw ConfigError(fmt::format("unknown field '{}'", name));
}

InflowData inflow_data(const FarFieldData& far) noexcept {
  return {far.rho_minus(), far.u_minus(), far.n_minus(), far.u_minus()};
}

namespace {

/// Conserved variables (rho, rho u, n, n v) on nodes 0..N-1 plus two ghost
/// nodes N, N+1 that copy node N-1.
struct Conserved {
  std::vector<double> r, m, n, k;

  explicit Conserved(std::size_t nodes = 0) : r(nodes + 2), m(nodes + 2), n(nodes + 2), k(nodes + 2) {}
  std::size_t nodes() const noexcept { return r.size() - 2; }
};

struct BoundaryFlux {
  double in_r = 0.0, in_n = 0.0, out_r = 0.0, out_n = 0.0;
};

void fill_ghosts(Conserved& q) {
  const std::size_t last = q.nodes() - 1;
  for (std::size_t g = last + 1; g <= last + 2; ++g) {
    q.r[g] = q.r[last];
    q.m[g] = q.m[last];
    q.n[g] = q.n[last];
    q.k[g] = q.k[last];
  }
}

Conserved to_conserved(const EvolutionState& s) {
  Conserved q(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    q.r[i] = s.rho[i];
    q.m[i] = s.rho[i] * s.u[i];
    q.n[i] = s.n[i];
    q.k[i] = s.n[i] * s.v[i];
  }
  fill_ghosts(q);
  return q;
}

void to_primitive(const Conserved& q, const InflowData& inflow, EvolutionState& s) {
  const std::size_t N = q.nodes();
  s.rho.resize(N);
  s.u.resize(N);
  s.n.resize(N);
  s.v.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    s.rho[i] = q.r[i];
    s.u[i] = q.m[i] / q.r[i];
    s.n[i] = q.n[i];
    s.v[i] = q.k[i] / q.n[i];
  }
  s.rho[0] = inflow.rho;
  s.u[0] = inflow.u;
  s.n[0] = inflow.n;
  s.v[0] = inflow.v;
}

/// Third-order upwind-biased face value between nodes i and i+1, written as
/// a correction to the upwind node so that constants pass through exactly.
inline double upwind3(const std::vector<double>& f, std::size_t i, bool forward) {
  constexpr double sixth = 1.0 / 6.0;
  if (forward) return f[i] + (2.0 * (f[i + 1] - f[i]) + (f[i] - f[i - 1])) * sixth;
  return f[i + 1] + (2.0 * (f[i] - f[i + 1]) + (f[i + 1] - f[i + 2])) * sixth;
}

class Scheme {
 public:
  Scheme(const ModelParams& params, double dx, const SchemeOptions& opt, std::size_t nodes)
      : params_(params), dx_(dx), opt_(opt), u_(nodes + 2), v_(nodes + 2), g1_(nodes + 2), g2_(nodes + 2),
        fr_(nodes), fm_(nodes), fn_(nodes), fk_(nodes) {}

  /// Semi-discrete right-hand side on nodes 1..N-1. Node 0 and the ghosts
  /// get zero. Also returns the continuity fluxes through both ends.
  BoundaryFlux rhs(const Conserved& q, Conserved& dq) {
    const std::size_t N = q.nodes();
    const double mu = params_.mu();
    const double A1 = params_.A1(), A2 = params_.A2(), gam = params_.gamma(), alp = params_.alpha();
    double umax = 0.0, vmax = 0.0, c1max = 0.0, c2max = 0.0;
    for (std::size_t i = 0; i < N + 2; ++i) {
      u_[i] = q.m[i] / q.r[i];
      v_[i] = q.k[i] / q.n[i];
      const double c1 = A1 * detail::power(q.r[i], gam - 1.0);
      const double c2 = A2 * detail::power(q.n[i], alp - 1.0);
      g1_[i] = q.m[i] * u_[i] + c1 * q.r[i];
      g2_[i] = q.k[i] * v_[i] + c2 * q.n[i];
      umax = std::max(umax, std::abs(u_[i]));
      vmax = std::max(vmax, std::abs(v_[i]));
      c1max = std::max(c1max, c1);
      c2max = std::max(c2max, c2);
    }
    // One wave-speed bound per phase for the whole grid.
    const double a1 = umax + std::sqrt(gam * c1max);
    const double a2 = vmax + std::sqrt(alp * c2max);
    const double inv = 1.0 / dx_;
    // Face i holds the flux through x_{i+1/2}, i = 0..N-1.
    for (std::size_t i = 0; i < N; ++i) {
      const double visc1 = mu * (u_[i + 1] - u_[i]) * inv;
      const double visc2 = 0.5 * (q.n[i] + q.n[i + 1]) * (v_[i + 1] - v_[i]) * inv;
      double g1 = g1_[i] + 0.5 * (g1_[i + 1] - g1_[i]);
      double g2 = g2_[i] + 0.5 * (g2_[i + 1] - g2_[i]);
      if (i == 0) {
        fr_[i] = q.m[0] + 0.5 * (q.m[1] - q.m[0]);
        fn_[i] = q.k[0] + 0.5 * (q.k[1] - q.k[0]);
      } else {
        fr_[i] = upwind3(q.m, i, u_[i] + u_[i + 1] >= 0.0);
        fn_[i] = upwind3(q.k, i, v_[i] + v_[i + 1] >= 0.0);
        g1 += opt_.kappa4 * a1 * (q.m[i + 2] - 3.0 * q.m[i + 1] + 3.0 * q.m[i] - q.m[i - 1]);
        g2 += opt_.kappa4 * a2 * (q.k[i + 2] - 3.0 * q.k[i + 1] + 3.0 * q.k[i] - q.k[i - 1]);
      }
      fm_[i] = g1 - visc1;
      fk_[i] = g2 - visc2;
    }
    for (auto* f : {&dq.r, &dq.m, &dq.n, &dq.k}) f->assign(N + 2, 0.0);
    for (std::size_t i = 1; i < N; ++i) {
      const double drag = opt_.drag ? q.n[i] * (v_[i] - u_[i]) : 0.0;
      dq.r[i] = -(fr_[i] - fr_[i - 1]) * inv;
      dq.m[i] = -(fm_[i] - fm_[i - 1]) * inv + drag;
      dq.n[i] = -(fn_[i] - fn_[i - 1]) * inv;
      dq.k[i] = -(fk_[i] - fk_[i - 1]) * inv - drag;
    }
    return {fr_[0], fn_[0], fr_[N - 1], fn_[N - 1]};
  }

 private:
  const ModelParams& params_;
  double dx_;
  SchemeOptions opt_;
  std::vector<double> u_, v_, g1_, g2_;
  std::vector<double> fr_, fm_, fn_, fk_;
};

enum class StageCheck { Ok, Negative, NonFinite };

StageCheck check(const Conserved& q, std::size_t* where) {
  const std::size_t N = q.nodes();
  for (std::size_t i = 0; i < N; ++i) {
    const double vals[4] = {q.r[i], q.m[i], q.n[i], q.k[i]};
    for (double x : vals) {
      if (!std::isfinite(x)) {
        *where = i;
        return StageCheck::NonFinite;
      }
    }
    if (!(q.r[i] > 0.0) || !(q.n[i] > 0.0)) {
      *where = i;
      return StageCheck::Negative;
    }
  }
  return StageCheck::Ok;
}

/// a * x + b * (y + dt * dy), node 0 kept, ghosts refreshed.
void combine(double a, const Conserved& x, double b, const Conserved& y, double dt, const Conserved& dy,
             Conserved& out) {
  const std::size_t N = x.nodes();
  auto mix = [&](const std::vector<double>& xa, const std::vector<double>& ya, const std::vector<double>& da,
                 std::vector<double>& o) {
    o[0] = xa[0];
    for (std::size_t i = 1; i < N; ++i) o[i] = a * xa[i] + b * (ya[i] + dt * da[i]);
  };
  mix(x.r, y.r, dy.r, out.r);
  mix(x.m, y.m, dy.m, out.m);
  mix(x.n, y.n, dy.n, out.n);
  mix(x.k, y.k, dy.k, out.k);
  fill_ghosts(out);
}

struct Stepper {
  Scheme scheme;
  Conserved k1, k2, k3, d;
  int max_retries;

  Stepper(const ModelParams& params, double dx, const SchemeOptions& opt, std::size_t nodes)
      : scheme(params, dx, opt, nodes), k1(nodes), k2(nodes), k3(nodes), d(nodes),
        max_retries(opt.max_retries) {}

  struct Outcome {
    double dt = 0.0;
    int retries = 0;
    double net_r = 0.0, net_n = 0.0;  // inflow minus outflow, integrated over the step
  };

  /// Shu-Osher SSP-RK3. On success q holds the new level.
  Outcome advance(Conserved& q, double dt, double time) {
    Outcome out;
    for (int attempt = 0;; ++attempt) {
      const BoundaryFlux b0 = scheme.rhs(q, d);
      combine(0.0, q, 1.0, q, dt, d, k1);
      StageCheck st = stage_ok(k1, time);
      BoundaryFlux b1, b2;
      if (st == StageCheck::Ok) {
        b1 = scheme.rhs(k1, d);
        combine(0.75, q, 0.25, k1, dt, d, k2);
        st = stage_ok(k2, time);
      }
      if (st == StageCheck::Ok) {
        b2 = scheme.rhs(k2, d);
        combine(1.0 / 3.0, q, 2.0 / 3.0, k2, dt, d, k3);
        st = stage_ok(k3, time);
      }
      if (st == StageCheck::Ok) {
        std::swap(q, k3);
        out.dt = dt;
        out.retries = attempt;
        const double w0 = dt / 6.0, w1 = dt / 6.0, w2 = 2.0 * dt / 3.0;
        out.net_r = w0 * (b0.in_r - b0.out_r) + w1 * (b1.in_r - b1.out_r) + w2 * (b2.in_r - b2.out_r);
        out.net_n = w0 * (b0.in_n - b0.out_n) + w1 * (b1.in_n - b1.out_n) + w2 * (b2.in_n - b2.out_n);
        return out;
      }
      if (attempt >= max_retries)
        throw BlowUpError(fmt::format("density lost positivity at t = {:.17g} after {} dt halvings", time,
                                      attempt));
      dt *= 0.5;
    }
  }

  StageCheck stage_ok(const Conserved& q, double time) const {
    std::size_t where = 0;
    const StageCheck st = check(q, &where);
    if (st == StageCheck::NonFinite) {
      throw BlowUpError(fmt::format("non-finite value at t = {:.17g}, node {}: rho={} m={} n={} k={}", time,
                                    where, q.r[where], q.m[where], q.n[where], q.k[where]));
    }
    return st;
  }
};

double grid_spacing(const std::vector<double>& x) {
  if (x.size() < 5) throw UsageError("evolution grid needs at least 5 nodes");
  return x[1] - x[0];
}

long double interior_mass(const std::vector<double>& f, std::size_t nodes, double dx) {
  long double s = 0.0L;
  for (std::size_t i = 1; i < nodes; ++i) s += f[i];
  return s * dx;
}

double gaussian(const Bump& b, double x) {
  const double z = (x - b.center) / b.width;
  return b.amplitude * std::exp(-0.5 * z * z);
}

std::vector<double>& field_of(EvolutionState& s, Field f) {
  switch (f) {
    case Field::Rho: return s.rho;
    case Field::U: return s.u;
    case Field::N: return s.n;
    case Field::V: return s.v;
  }
  return s.u;
}

/// max |f| refined by the parabola through the largest node and its two
/// neighbours, so the grid position of a smooth peak does not leak into the
/// estimate at second order.
double peak_abs(const std::vector<double>& f) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < f.size(); ++i)
    if (std::abs(f[i]) > std::abs(f[k])) k = i;
  const double g0 = std::abs(f[k]);
  if (k == 0 || k + 1 >= f.size() || !(f[k - 1] * f[k] > 0.0) || !(f[k + 1] * f[k] > 0.0)) return g0;
  const double gm = std::abs(f[k - 1]), gp = std::abs(f[k + 1]);
  const double curv = gm - 2.0 * g0 + gp;
  if (!(curv < 0.0)) return g0;
  return g0 - (gp - gm) * (gp - gm) / (8.0 * curv);
}

}  // namespace

EvolutionState init_state(const StationaryProfile& profile, const PerturbationSpec& spec,
                          const InflowData& inflow) {
  EvolutionState s;
  s.x = profile.x;
  grid_spacing(s.x);
  s.rho = profile.rho;
  s.u = profile.u;
  s.n = profile.n;
  s.v = profile.v;
  for (const Bump& b : spec.bumps) {
    if (!(b.width > 0.0) || !std::isfinite(b.amplitude) || !std::isfinite(b.center))
      throw RejectedPerturbation("bump needs finite amplitude/center and positive width");
    if (b.field == Field::Rho || b.field == Field::N) {
      const auto& base = b.field == Field::Rho ? profile.rho : profile.n;
      const double floor = *std::min_element(base.begin(), base.end());
      if (std::abs(b.amplitude) >= floor)
        throw RejectedPerturbation(
            fmt::format("bump amplitude {} on {} reaches the minimum density {}", b.amplitude, to_string(b.field), floor));
    }
    if (std::abs(gaussian(b, 0.0)) > 1e-10 * std::abs(b.amplitude))
      throw RejectedPerturbation(
          fmt::format("bump on {} does not vanish at x = 0 (value {:.3e})", to_string(b.field), gaussian(b, 0.0)));
    auto& f = field_of(s, b.field);
    for (std::size_t i = 1; i < s.size(); ++i) f[i] += gaussian(b, s.x[i]);
  }
  s.rho[0] = inflow.rho;
  s.u[0] = inflow.u;
  s.n[0] = inflow.n;
  s.v[0] = inflow.v;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s.rho[i] > 0.0) || !(s.n[i] > 0.0))
      throw RejectedPerturbation(fmt::format("perturbed density is nonpositive at x = {}", s.x[i]));
  }
  const EnergyReport norms = perturbation_norms(perturbation(s, profile), s.x[1] - s.x[0]);
  if (norms.h1_norm > spec.max_h1)
    throw RejectedPerturbation(
        fmt::format("perturbation H1 norm {:.6e} exceeds the limit {:.6e}", norms.h1_norm, spec.max_h1));
  return s;
}

double stable_dt(const EvolutionState& s, const ModelParams& params, const SchemeOptions& opt) {
  const double dx = grid_spacing(s.x);
  double speed = 0.0, rho_min = INFINITY;
  for (std::size_t i = 0; i < s.size(); ++i) {
    speed = std::max({speed, std::abs(s.u[i]) + std::sqrt(pressure_derivative(params, Phase::One, s.rho[i])),
                      std::abs(s.v[i]) + std::sqrt(pressure_derivative(params, Phase::Two, s.n[i]))});
    rho_min = std::min(rho_min, s.rho[i]);
  }
  const double visc = std::max(params.mu() / rho_min, 1.0);
  return opt.cfl * std::min(dx / speed, dx * dx / (2.0 * visc));
}

StepResult step(const EvolutionState& s, const ModelParams& params, const InflowData& inflow, double dt,
                const SchemeOptions& opt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const double dx = grid_spacing(s.x);
  Conserved q = to_conserved(s);
  Stepper stepper(params, dx, opt, s.size());
  const auto out = stepper.advance(q, dt, s.time);
  StepResult r;
  r.state.x = s.x;
  r.state.time = s.time + out.dt;
  to_primitive(q, inflow, r.state);
  r.dt_used = out.dt;
  r.retries = out.retries;
  r.inflow_rho = out.net_r;
  r.inflow_n = out.net_n;
  return r;
}

PerturbationState perturbation(const EvolutionState& s, const StationaryProfile& profile) {
  const std::size_t N = s.size();
  if (profile.size() != N || N == 0 || s.x.front() != profile.x.front() || s.x.back() != profile.x.back())
    throw UsageError("state and profile live on different grids");
  PerturbationState p;
  p.phi.resize(N);
  p.psi.resize(N);
  p.phi_bar.resize(N);
  p.psi_bar.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    p.phi[i] = s.rho[i] - profile.rho[i];
    p.psi[i] = s.u[i] - profile.u[i];
    p.phi_bar[i] = s.n[i] - profile.n[i];
    p.psi_bar[i] = s.v[i] - profile.v[i];
  }
  p.psi[0] = 0.0;
  p.psi_bar[0] = 0.0;
  return p;
}

double relative_entropy(double A, double e, double ref, double rho) {
  if (!(ref > 0.0) || !(rho > 0.0)) throw DomainError("relative entropy needs positive densities");
  const double t = std::log1p((rho - ref) / ref);
  const double c = e - 1.0;
  double g;
  if (std::abs(t) < 0.1) {
    // sum_{k>=2} (c^{k-1} + (-1)^k) t^k / k!
    g = 0.0;
    double tk = t, ck = 1.0, sign = -1.0;
    for (int k = 2; k < 40; ++k) {
      tk *= t / k;
      ck *= c;
      sign = -sign;
      const double term = (ck + sign) * tk;
      g += term;
      if (std::abs(term) <= 1e-18 * std::abs(g)) break;
    }
  } else if (c == 0.0) {
    g = t + std::expm1(-t);
  } else {
    g = std::expm1(c * t) / c + std::expm1(-t);
  }
  return rho * A * detail::power(ref, c) * g;
}

double relative_entropy_quadrature(double A, double e, double ref, double rho, double tol) {
  if (!(ref > 0.0) || !(rho > 0.0)) throw DomainError("relative entropy needs positive densities");
  const double pref = A * std::pow(ref, e);
  auto f = [&](double s) { return (A * std::pow(s, e) - pref) / (s * s); };
  return rho * integrate_adaptive(f, ref, rho, tol);
}

EnergyReport perturbation_norms(const PerturbationState& p, double dx) {
  const std::size_t N = p.phi.size();
  EnergyReport r;
  std::vector<double> sq(N, 0.0), dsq(N, 0.0);
  for (const auto* f : {&p.phi, &p.psi, &p.phi_bar, &p.psi_bar}) {
    const std::vector<double> g = gradient_uniform4(*f, dx);
    for (std::size_t i = 0; i < N; ++i) {
      sq[i] += (*f)[i] * (*f)[i];
      dsq[i] += g[i] * g[i];
    }
    r.sup_norm = std::max(r.sup_norm, peak_abs(*f));
  }
  const double l2sq = integrate_uniform(sq, dx);
  r.l2_norm = std::sqrt(l2sq);
  r.h1_norm = std::sqrt(l2sq + integrate_uniform(dsq, dx));
  return r;
}

EnergyReport energy(const EvolutionState& s, const StationaryProfile& profile, const ModelParams& params) {
  const PerturbationState p = perturbation(s, profile);
  const double dx = grid_spacing(s.x);
  EnergyReport r = perturbation_norms(p, dx);
  const std::size_t N = s.size();
  std::vector<double> e(N), d(N);
  const std::vector<double> psi_x = gradient_uniform4(p.psi, dx);
  const std::vector<double> psib_x = gradient_uniform4(p.psi_bar, dx);
  for (std::size_t i = 0; i < N; ++i) {
    const double phi1 = relative_entropy(params.A1(), params.gamma(), profile.rho[i], s.rho[i]);
    const double phi2 = relative_entropy(params.A2(), params.alpha(), profile.n[i], s.n[i]);
    e[i] = s.rho[i] * (0.5 * p.psi[i] * p.psi[i] + phi1) + s.n[i] * (0.5 * p.psi_bar[i] * p.psi_bar[i] + phi2);
    const double slip = p.psi_bar[i] - p.psi[i];
    d[i] = s.n[i] * slip * slip + params.mu() * psi_x[i] * psi_x[i] + s.n[i] * psib_x[i] * psib_x[i];
  }
  r.e_total = integrate_uniform(e, dx);
  r.dissipation = integrate_uniform(d, dx);
  return r;
}

RunResult run(const EvolutionState& initial, const ModelParams& params, const StationaryProfile& profile,
              const InflowData& inflow, double t_end, double report_every, const SchemeOptions& opt) {
  if (!(t_end >= 0.0) || !(report_every > 0.0)) throw DomainError("need t_end >= 0 and report_every > 0");
  const double dx = grid_spacing(initial.x);
  const std::size_t N = initial.size();
  Conserved q = to_conserved(initial);
  Stepper stepper(params, dx, opt, N);

  RunResult res;
  EvolutionState cur;
  cur.x = initial.x;
  cur.time = initial.time;
  to_primitive(q, inflow, cur);
  res.series.push_back({cur.time, energy(cur, profile, params)});

  const long double mass_r0 = interior_mass(q.r, N, dx), mass_n0 = interior_mass(q.n, N, dx);
  long double net_r = 0.0L, net_n = 0.0L;
  const double t0 = initial.time;
  long report_index = 1;
  double next_report = std::min(t0 + report_every, t0 + t_end);
  double t = t0;
  const double t_stop = t0 + t_end;

  while (t < t_stop) {
    double dt = stable_dt(cur, params, opt);
    bool hits = false;
    if (t + dt >= next_report) {
      dt = next_report - t;
      hits = true;
    }
    const auto out = stepper.advance(q, dt, t);
    ++res.steps;
    res.retries += out.retries;
    net_r += out.net_r;
    net_n += out.net_n;
    const bool reached = hits && out.dt == dt;
    t = reached ? next_report : t + out.dt;
    cur.time = t;
    to_primitive(q, inflow, cur);

    const long double mr = interior_mass(q.r, N, dx), mn = interior_mass(q.n, N, dx);
    const double drift = static_cast<double>(std::max(std::abs(mr - mass_r0 - net_r) / mass_r0,
                                                      std::abs(mn - mass_n0 - net_n) / mass_n0));
    res.mass_drift = std::max(res.mass_drift, drift);

    if (reached) {
      res.series.push_back({t, energy(cur, profile, params)});
      ++report_index;
      next_report = std::min(t0 + static_cast<double>(report_index) * report_every, t_stop);
    }
  }
  res.final_state = std::move(cur);
  return res;
}

}  // namespace twophase
