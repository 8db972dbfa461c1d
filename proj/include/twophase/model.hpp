#pragma once

#include <string>
#include <string_view>

namespace twophase {

enum class Phase { One = 1, Two = 2 };

/// Constitutive constants of the two-fluid system: power-law pressures
/// p1(rho) = A1 rho^gamma, p2(n) = A2 n^alpha and the viscosity mu of the
/// first phase. Validated on construction; immutable afterwards.
class ModelParams {
 public:
  ModelParams(double A1, double A2, double gamma, double alpha, double mu);

  double A1() const noexcept { return A1_; }
  double A2() const noexcept { return A2_; }
  double gamma() const noexcept { return gamma_; }
  double alpha() const noexcept { return alpha_; }
  double mu() const noexcept { return mu_; }

  double coefficient(Phase p) const noexcept { return p == Phase::One ? A1_ : A2_; }
  double exponent(Phase p) const noexcept { return p == Phase::One ? gamma_ : alpha_; }

 private:
  double A1_, A2_, gamma_, alpha_, mu_;
};

/// Boundary state (rho-, n-, u-) at x = 0 and far-field state (rho+, n+, u+)
/// tied together by constancy of both mass fluxes. The second velocity
/// equals u- at the boundary and u+ at infinity, so it is not stored.
class FarFieldData {
 public:
  /// Validates positivity and both flux-compatibility relations (relative
  /// tolerance 1e-12). Prefer complete_far_field() for exact construction.
  FarFieldData(double rho_minus, double n_minus, double u_minus, double rho_plus,
               double n_plus, double u_plus);

  double rho_minus() const noexcept { return rho_minus_; }
  double n_minus() const noexcept { return n_minus_; }
  double u_minus() const noexcept { return u_minus_; }
  double rho_plus() const noexcept { return rho_plus_; }
  double n_plus() const noexcept { return n_plus_; }
  double u_plus() const noexcept { return u_plus_; }
  double delta() const noexcept { return delta_; }

  /// Signed boundary offset u- - u+.
  double offset() const noexcept { return u_minus_ - u_plus_; }

 private:
  double rho_minus_, n_minus_, u_minus_, rho_plus_, n_plus_, u_plus_, delta_;
};

enum class Regime { Supersonic, Subsonic, Sonic };

inline constexpr double kSonicTolerance = 1e-9;

struct RegimeLabel {
  Regime tag;
  double mach;
};

std::string_view to_string(Regime r) noexcept;
Regime parse_regime(std::string_view label);

/// Classifies by |M - 1| <= tol (relative to 1).
RegimeLabel classify(double mach, double tol = kSonicTolerance) noexcept;

double pressure(const ModelParams& params, Phase phase, double density);
double pressure_derivative(const ModelParams& params, Phase phase, double density);
double pressure_second_derivative(const ModelParams& params, Phase phase, double density);

/// Mixture sound speed c+ = sqrt((A1 gamma rho+^gamma + A2 alpha n+^alpha) / (rho+ + n+)).
double sound_speed(const ModelParams& params, double rho_plus, double n_plus);

double mach_number(const ModelParams& params, const FarFieldData& far);

inline RegimeLabel classify(const ModelParams& params, const FarFieldData& far,
                            double tol = kSonicTolerance) {
  return classify(mach_number(params, far), tol);
}

/// Far field from boundary data: rho+ = rho- u- / u+, n+ = n- u- / u+.
FarFieldData complete_far_field(const ModelParams& params, double rho_minus, double n_minus,
                                double u_minus, double u_plus);

/// RHS - LHS of the sonic stability hypothesis
///   |p1'(rho+) - p2'(n+)| <= sqrt(2) u+ min{(1 + rho+/n+) sqrt((gamma-1) p1'(rho+)),
///                                        (1 + n+/rho+) sqrt((alpha-1) p2'(n+))}.
/// Nonnegative means the hypothesis holds. gamma = 1 or alpha = 1 makes the
/// RHS vanish.
double sonic_stability_margin(const ModelParams& params, const FarFieldData& far);

}  // namespace twophase
