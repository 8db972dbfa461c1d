#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "twophase/errors.hpp"
#include "twophase/evolution.hpp"
#include "twophase/io.hpp"
#include "twophase/quadrature.hpp"

using namespace twophase;
using doctest::Approx;

namespace {

const ModelParams kUnit(1, 1, 1, 1, 1);

FarFieldData far(double u_plus, double delta, const ModelParams& p = kUnit) {
  const double um = u_plus - delta;
  return complete_far_field(p, u_plus / um, u_plus / um, um, u_plus);
}

StationaryProfile profile(const FarFieldData& f, std::size_t nodes, double length, const ModelParams& p = kUnit) {
  GridSpec g;
  g.nodes = nodes;
  g.length = length;
  return solve_stationary(p, f, g);
}

PerturbationSpec bump(Field field, double amplitude, double center = 20.0, double width = 2.0) {
  PerturbationSpec s;
  s.bumps.push_back({field, amplitude, center, width});
  return s;
}

double max_deviation(const EvolutionState& a, const EvolutionState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max({d, std::abs(a.rho[i] - b.rho[i]), std::abs(a.u[i] - b.u[i]), std::abs(a.n[i] - b.n[i]),
                  std::abs(a.v[i] - b.v[i])});
  return d;
}

}  // namespace

TEST_CASE("zero perturbation reproduces the profile") {
  const auto f = far(0.5, 1e-3);
  const StationaryProfile p = profile(f, 1025, 60);
  const InflowData in = inflow_data(f);
  const EvolutionState s = init_state(p, {}, in);
  CHECK(s.rho[0] == f.rho_minus());
  CHECK(s.u[0] == f.u_minus());
  CHECK(s.n[0] == f.n_minus());
  CHECK(s.v[0] == f.u_minus());
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(s.rho[i] == p.rho[i]);
    CHECK(s.u[i] == p.u[i]);
    CHECK(s.n[i] == p.n[i]);
    CHECK(s.v[i] == p.v[i]);
  }
  const EnergyReport e = energy(s, p, kUnit);
  CHECK(e.sup_norm <= 1e-8);
  CHECK(e.e_total >= 0.0);
}

TEST_CASE("gaussian bump has the analytic H1 norm and round-trips") {
  const auto f = far(0.5, 0.0);
  const StationaryProfile p = profile(f, 4097, 100);
  const double A = 1e-3, w = 2.0;
  const EvolutionState s = init_state(p, bump(Field::U, A, 50.0, w), inflow_data(f));
  const PerturbationState q = perturbation(s, p);
  const EnergyReport n = perturbation_norms(q, s.x[1] - s.x[0]);
  CHECK(n.h1_norm == Approx(std::sqrt(oracle::gaussian_h1_sq(A, w))).epsilon(1e-6));
  CHECK(n.sup_norm == Approx(A).epsilon(1e-12));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = A * std::exp(-std::pow(s.x[i] - 50.0, 2) / (2 * w * w));
    CHECK(std::abs(q.psi[i] - g) <= 1e-12 * A + 1e-18);
    CHECK(q.phi[i] == 0.0);
    CHECK(q.phi_bar[i] == 0.0);
    CHECK(q.psi_bar[i] == 0.0);
  }
  CHECK(q.psi[0] == 0.0);
  CHECK(q.psi_bar[0] == 0.0);
  const EnergyReport m = energy(s, p, kUnit);
  CHECK(std::abs(m.h1_norm - n.h1_norm) <= 1e-12 * n.h1_norm);
  CHECK(std::abs(m.l2_norm - n.l2_norm) <= 1e-12 * n.l2_norm);

  // With rho equal to the profile the energy density is rho psi^2 / 2.
  std::vector<double> dens(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) dens[i] = 0.5 * s.rho[i] * q.psi[i] * q.psi[i];
  CHECK(m.e_total == Approx(integrate_uniform(dens, s.x[1] - s.x[0])).epsilon(1e-13));
}

TEST_CASE("inadmissible perturbations are rejected") {
  const auto f = far(0.5, 1e-3);
  const StationaryProfile p = profile(f, 1025, 60);
  const InflowData in = inflow_data(f);
  double rho_min = INFINITY;
  for (double r : p.rho) rho_min = std::min(rho_min, r);
  PerturbationSpec big = bump(Field::Rho, -1.01 * rho_min);
  big.max_h1 = 1e3;
  CHECK_THROWS_AS(init_state(p, big, in), RejectedPerturbation);
  CHECK_THROWS_AS(init_state(p, bump(Field::U, 1e-3, 1.0, 2.0), in), RejectedPerturbation);
  CHECK_THROWS_AS(init_state(p, bump(Field::V, 0.1), in), RejectedPerturbation);
  CHECK_THROWS_AS(init_state(p, bump(Field::N, 1e-4, 20.0, 0.0), in), RejectedPerturbation);
  CHECK_NOTHROW(init_state(p, bump(Field::N, 1e-4), in));
}

TEST_CASE("perturbation requires a shared grid") {
  const auto f = far(0.5, 0.0);
  const EvolutionState s = init_state(profile(f, 101, 10), {}, inflow_data(f));
  CHECK_THROWS_AS(perturbation(s, profile(f, 201, 10)), UsageError);
}

TEST_CASE("constant state is a discrete fixed point") {
  const ModelParams p(1.3, 0.8, 1.4, 2.0, 0.7);
  for (double up : {0.5, 2.0}) {
    const auto f = complete_far_field(p, 1.2, 0.9, up, up);
    const StationaryProfile prof = profile(f, 513, 40, p);
    const InflowData in = inflow_data(f);
    EvolutionState s = init_state(prof, {}, in);
    const EvolutionState s0 = s;
    for (int k = 0; k < 200; ++k) s = step(s, p, in, stable_dt(s, p)).state;
    // Rounding of the nonlinear pressure evaluation is the only allowed change.
    CHECK(max_deviation(s, s0) <= 4 * std::numeric_limits<double>::epsilon() * 2.0);
  }
}

TEST_CASE("stationary profile is a near fixed point with grid-convergent defect") {
  const auto f = far(0.5, 1e-2);
  double defect[2];
  const std::size_t nodes[2] = {513, 1025};
  for (int k = 0; k < 2; ++k) {
    const StationaryProfile p = profile(f, nodes[k], 40);
    const InflowData in = inflow_data(f);
    const EvolutionState s = init_state(p, {}, in);
    const double dt = 0.25 * stable_dt(s, kUnit);
    const StepResult r = step(s, kUnit, in, dt);
    defect[k] = max_deviation(r.state, s) / r.dt_used;
  }
  MESSAGE("defect ", defect[0], " -> ", defect[1]);
  CHECK(defect[0] < f.delta());
  CHECK(defect[1] < defect[0] / 3.0);
}

TEST_CASE("decoupled first phase relaxes monotonically") {
  // Weak pressure makes the first phase close to viscous Burgers.
  const ModelParams weak(1e-3, 1, 1, 1, 1);
  const auto f = far(0.5, 0.0, weak);
  const StationaryProfile p = profile(f, 1025, 80, weak);
  const InflowData in = inflow_data(f);
  EvolutionState s = init_state(p, bump(Field::U, 1e-3, 40.0, 3.0), in);
  SchemeOptions opt;
  opt.drag = false;
  const double dx = s.x[1] - s.x[0];
  auto ux_norm = [&](const EvolutionState& st) {
    const auto g = gradient_uniform(st.u, dx);
    std::vector<double> g2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) g2[i] = g[i] * g[i];
    return std::sqrt(integrate_uniform(g2, dx));
  };
  double prev = ux_norm(s);
  const double first = prev;
  int increases = 0;
  while (s.time < 10.0) {
    for (int k = 0; k < 50; ++k) s = step(s, weak, in, stable_dt(s, weak, opt), opt).state;
    const double cur = ux_norm(s);
    increases += cur > prev * (1 + 1e-12);
    prev = cur;
  }
  for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(s.n[i] == p.n[i]);
  for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(s.v[i] == p.v[i]);
  CHECK(increases == 0);
  CHECK(prev < 0.5 * first);
}

TEST_CASE("relative entropy closed forms") {
  const double e = std::exp(1.0);
  CHECK(relative_entropy(1, 1, 1, e) == Approx(oracle::relative_entropy(1, 1, 1, e)).epsilon(1e-12));
  CHECK(relative_entropy(1, 1, 1, e) == Approx(e * (1.0 + 1.0 / e - 1.0)).epsilon(1e-14));
  CHECK(relative_entropy(2, 1.7, 1.3, 1.3) == 0.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.2, 5.0), E(1.0, 3.0), S(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double A = U(rng), g = i % 5 == 0 ? 1.0 : E(rng), ref = U(rng);
    const double rho = ref * std::exp(i % 7 == 0 ? 1e-3 * S(rng) : S(rng));
    const double c = relative_entropy(A, g, ref, rho);
    CHECK(c > 0.0);
    CHECK(c == Approx(oracle::relative_entropy(A, g, ref, rho)).epsilon(1e-10));
    CHECK(c == Approx(relative_entropy_quadrature(A, g, ref, rho)).epsilon(1e-10));
  }
}

TEST_CASE("small subsonic bump decays with conserved mass and nonincreasing energy") {
  const auto f = far(0.5, 1e-3);
  const StationaryProfile p = profile(f, 1025, 100);
  const InflowData in = inflow_data(f);
  PerturbationSpec spec = bump(Field::U, 5e-4, 30.0, 2.0);
  spec.bumps.push_back({Field::Rho, 2e-4, 35.0, 3.0});
  const EvolutionState s0 = init_state(p, spec, in);
  const RunResult r = run(s0, kUnit, p, in, 20.0, 1.0);
  REQUIRE(r.series.size() == 21);
  CHECK(r.series.back().t == Approx(20.0));
  CHECK(r.mass_drift <= 1e-10);
  for (const auto& e : r.series) CHECK(e.report.e_total >= 0.0);
  for (std::size_t k = 3; k < r.series.size(); ++k)
    CHECK(r.series[k].report.e_total <= r.series[k - 1].report.e_total * (1 + 1e-3));
  CHECK(r.series.back().report.sup_norm < r.series.front().report.sup_norm);
  for (std::size_t i = 0; i < r.final_state.size(); ++i) {
    REQUIRE(r.final_state.rho[i] > 0.0);
    REQUIRE(r.final_state.n[i] > 0.0);
  }
  CHECK(r.final_state.u[0] == f.u_minus());
}

TEST_CASE("sup-norm trajectories converge at second order") {
  const auto f = far(0.5, 0.0);
  std::vector<EnergySample> series[3];
  EvolutionState last[3];
  const std::size_t nodes[3] = {257, 513, 1025};
  for (int k = 0; k < 3; ++k) {
    const StationaryProfile p = profile(f, nodes[k], 40);
    const InflowData in = inflow_data(f);
    const EvolutionState s0 = init_state(p, bump(Field::U, 1e-3, 20.0, 2.0), in);
    const RunResult r = run(s0, kUnit, p, in, 2.0, 0.5);
    series[k] = r.series;
    last[k] = r.final_state;
  }
  double gap[2] = {0, 0}, field_gap[2] = {0, 0};
  for (int k = 0; k < 2; ++k) {
    REQUIRE(series[k].size() == series[k + 1].size());
    for (std::size_t t = 1; t < series[k].size(); ++t)
      gap[k] = std::max(gap[k], std::abs(series[k][t].report.sup_norm - series[k + 1][t].report.sup_norm));
    for (std::size_t i = 0; i < last[k].size(); ++i)
      field_gap[k] = std::max({field_gap[k], std::abs(last[k].u[i] - last[k + 1].u[2 * i]),
                               std::abs(last[k].rho[i] - last[k + 1].rho[2 * i])});
  }
  const double order = std::log2(gap[0] / gap[1]);
  const double field_order = std::log2(field_gap[0] / field_gap[1]);
  MESSAGE("sup-norm order ", order, ", field order ", field_order);
  CHECK(order >= 1.8);
  CHECK(field_order >= 1.8);
}

TEST_CASE("non-finite data aborts the step") {
  const auto f = far(0.5, 0.0);
  const StationaryProfile p = profile(f, 65, 10);
  const InflowData in = inflow_data(f);
  EvolutionState s = init_state(p, {}, in);
  s.u[20] = NAN;
  CHECK_THROWS_AS(step(s, kUnit, in, 1e-4), BlowUpError);
  CHECK_THROWS_AS(step(init_state(p, {}, in), kUnit, in, 0.0), DomainError);
}

TEST_CASE("time series and snapshot csv") {
  const auto f = far(0.5, 0.0);
  const StationaryProfile p = profile(f, 33, 8);
  const InflowData in = inflow_data(f);
  const RunResult r = run(init_state(p, {}, in), kUnit, p, in, 0.5, 0.25);
  std::ostringstream ts, snap;
  write_timeseries_csv(ts, r.series);
  write_snapshot_csv(snap, r.final_state);
  CHECK(ts.str().rfind("t,e_total,dissipation,l2,h1,sup\n", 0) == 0);
  CHECK(snap.str().rfind("t,x,rho,u,n,v\n", 0) == 0);
  const std::string a = ts.str(), b = snap.str();
  CHECK(std::count(a.begin(), a.end(), '\n') == 4);
  CHECK(std::count(b.begin(), b.end(), '\n') == 34);
}
