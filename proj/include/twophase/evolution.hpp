#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "twophase/model.hpp"
#include "twophase/stationary.hpp"

namespace twophase {

enum class Field { Rho, U, N, V };

std::string_view to_string(Field f) noexcept;
Field parse_field(std::string_view name);

/// Gaussian bump amplitude * exp(-(x - center)^2 / (2 width^2)) added to one
/// field.
struct Bump {
  Field field = Field::U;
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
};

struct PerturbationSpec {
  std::vector<Bump> bumps;
  /// Largest admissible H1 norm of the initial perturbation.
  double max_h1 = 1e-2;
};

/// Grid-sampled (rho, u, n, v) at one time level. Node 0 is the inflow
/// boundary.
struct EvolutionState {
  std::vector<double> x;
  std::vector<double> rho, u, n, v;
  double time = 0.0;

  std::size_t size() const noexcept { return x.size(); }
};

struct PerturbationState {
  std::vector<double> phi, psi, phi_bar, psi_bar;
};

struct EnergyReport {
  double e_total = 0.0;
  double dissipation = 0.0;
  double l2_norm = 0.0;
  double h1_norm = 0.0;
  /// Largest pointwise |component|; a smooth interior peak is refined by the
  /// parabola through its three nodes.
  double sup_norm = 0.0;
};

struct EnergySample {
  double t = 0.0;
  EnergyReport report;
};

struct SchemeOptions {
  double cfl = 0.4;
  /// Coefficient of the fourth-difference dissipation in the momentum fluxes.
  double kappa4 = 1.0 / 64.0;
  bool drag = true;
  int max_retries = 8;
};

/// Boundary data held fixed at node 0.
struct InflowData {
  double rho = 0.0, u = 0.0, n = 0.0, v = 0.0;
};

InflowData inflow_data(const FarFieldData& far) noexcept;

/// profile + perturbation, with node 0 pinned to the inflow data. Throws
/// RejectedPerturbation for bumps that break positivity, do not vanish at
/// x = 0, or exceed the H1 budget.
EvolutionState init_state(const StationaryProfile& profile, const PerturbationSpec& spec,
                          const InflowData& inflow);

/// Largest stable step: cfl * min(dx / max wave speed, dx^2 / (2 max(mu/rho, 1))).
double stable_dt(const EvolutionState& s, const ModelParams& params, const SchemeOptions& opt = {});

struct StepResult {
  EvolutionState state;
  double dt_used = 0.0;
  int retries = 0;
  /// Net mass inflow of each phase over the step (boundary flux integral).
  double inflow_rho = 0.0, inflow_n = 0.0;
};

/// One SSP-RK3 step of the conservative scheme. Halves dt on positivity loss
/// (up to opt.max_retries times); throws BlowUpError on NaN or exhausted
/// retries.
StepResult step(const EvolutionState& s, const ModelParams& params, const InflowData& inflow, double dt,
                const SchemeOptions& opt = {});

/// Pointwise differences state - profile; node 0 set to zero exactly.
PerturbationState perturbation(const EvolutionState& s, const StationaryProfile& profile);

/// Relative entropy rho int_{ref}^{rho} (p(s) - p(ref)) / s^2 ds for
/// p = A s^e, in closed form (logarithmic form for e = 1).
double relative_entropy(double A, double e, double ref, double rho);

/// Same integral by adaptive quadrature, for cross-checking.
double relative_entropy_quadrature(double A, double e, double ref, double rho, double tol = 1e-14);

EnergyReport energy(const EvolutionState& s, const StationaryProfile& profile, const ModelParams& params);

/// Norms of a perturbation alone (l2, h1, sup) on a uniform grid.
EnergyReport perturbation_norms(const PerturbationState& p, double dx);

struct RunResult {
  std::vector<EnergySample> series;
  EvolutionState final_state;
  long steps = 0;
  long retries = 0;
  /// Largest relative mass drift (mass change minus boundary inflow) over
  /// both phases and all steps.
  double mass_drift = 0.0;
};

/// Advances to t_end, reporting at t = 0, every report_every, and t_end.
RunResult run(const EvolutionState& initial, const ModelParams& params, const StationaryProfile& profile,
              const InflowData& inflow, double t_end, double report_every, const SchemeOptions& opt = {});

}  // namespace twophase
