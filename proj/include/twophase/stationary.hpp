#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "twophase/model.hpp"
#include "twophase/spectrum.hpp"

namespace twophase {

/// Right-hand side of the stationary first-order system in the deviation
/// variables y = (u - u+, u_x, v - u+). Densities follow from the two flux
/// relations rho u = rho+ u+, n v = n+ u+. Throws BlowUpError when either
/// velocity leaves (0, inf).
class StationaryOde {
 public:
  StationaryOde(const ModelParams& params, const FarFieldData& far);

  void operator()(double x, const Vec3& y, Vec3& dy) const;
  Vec3 rhs(const Vec3& y) const {
    Vec3 dy;
    (*this)(0.0, y, dy);
    return dy;
  }

 private:
  double u_plus_, m1_, m2_, mu_;
  double A1_, gamma_, alpha_;
  double p1_plus_, p2_plus_;
};

struct GridSpec {
  std::size_t nodes = 4096;
  /// Domain length; 0 selects L = max(50, 12/m) away from sonic and 40/delta
  /// at sonic.
  double length = 0.0;
  std::optional<Regime> force_regime;
  /// Largest |u- - u+| accepted by the solver.
  double max_delta = 0.1;
};

struct CenterManifoldData {
  double a = 0.0;
  double b = 0.0;
  /// Center coordinate z3 at x = 0 (negative for an admissible profile).
  double sigma0 = 0.0;
};

/// a and b of the sonic center-manifold reduction sigma' = a sigma^2 + ...
/// sigma0 is the linear estimate l3 . (u- - u+, 0, u- - u+). Throws
/// UsageError outside the sonic regime.
CenterManifoldData center_manifold_coeff(const ModelParams& params, const FarFieldData& far);

struct StationaryProfile {
  std::vector<double> x;
  std::vector<double> rho, u, n, v;
  /// Deviations u - u+, v - u+ carried at full relative precision.
  std::vector<double> du, dv;
  std::vector<double> ux, vx;

  RegimeLabel regime{Regime::Sonic, 1.0};
  /// Solver branch actually used (differs from regime.tag when forced).
  Regime solver = Regime::Sonic;
  double length = 0.0;
  double delta = 0.0;
  double u_plus = 0.0, rho_plus = 0.0, n_plus = 0.0;

  std::vector<double> shooting_params;
  int iterations = 0;
  double residual_norm = 0.0;
  double boundary_mismatch = 0.0;
  double flux_error = 0.0;
  double tail_deviation = 0.0;
  /// Largest relative change of u_x when a marching segment is re-projected
  /// at its junction (sonic only).
  double junction_jump = 0.0;
  std::optional<CenterManifoldData> center;

  std::size_t size() const noexcept { return x.size(); }
  bool trivial() const noexcept { return delta == 0.0; }
};

/// Constructs the stationary inflow profile by shooting on the stable
/// (M+ != 1) or center-stable (M+ = 1) manifold of the far-field state.
/// Throws NoProfileError when the boundary data cannot be met and
/// DomainError when delta exceeds spec.max_delta.
StationaryProfile solve_stationary(const ModelParams& params, const FarFieldData& far,
                                   const GridSpec& spec = {});

/// Max over interior nodes of |D4 y - F(y)| / max|F|, per component, using
/// fourth-order central differences on the profile's own grid.
double profile_residual(const ModelParams& params, const FarFieldData& far,
                        const StationaryProfile& profile);

/// Default truncation length for the given far field.
double default_length(const SpectrumReport& spectrum, double delta);

}  // namespace twophase
