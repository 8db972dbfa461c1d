#include "twophase/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "power.hpp"
#include "twophase/errors.hpp"

namespace twophase {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

ModelParams::ModelParams(double A1, double A2, double gamma, double alpha, double mu)
    : A1_(A1), A2_(A2), gamma_(gamma), alpha_(alpha), mu_(mu) {
  require_positive(A1, "A1");
  require_positive(A2, "A2");
  require_positive(mu, "mu");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw DomainError("gamma must be >= 1");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be >= 1");
}

FarFieldData::FarFieldData(double rho_minus, double n_minus, double u_minus, double rho_plus,
                           double n_plus, double u_plus)
    : rho_minus_(rho_minus),
      n_minus_(n_minus),
      u_minus_(u_minus),
      rho_plus_(rho_plus),
      n_plus_(n_plus),
      u_plus_(u_plus),
      delta_(std::abs(u_plus - u_minus)) {
  require_positive(rho_minus, "rho_minus");
  require_positive(n_minus, "n_minus");
  require_positive(u_minus, "u_minus");
  require_positive(rho_plus, "rho_plus");
  require_positive(n_plus, "n_plus");
  require_positive(u_plus, "u_plus");
  if (!close_relative(rho_plus * u_plus, rho_minus * u_minus, 1e-12) ||
      !close_relative(n_plus * u_plus, n_minus * u_minus, 1e-12)) {
    throw DomainError("far field violates mass-flux compatibility u+ rho+ = u- rho-, u+ n+ = u- n-");
  }
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Supersonic: return "Supersonic";
    case Regime::Subsonic: return "Subsonic";
    case Regime::Sonic: return "Sonic";
  }
  return "Unknown";
}

Regime parse_regime(std::string_view label) {
  std::string s(label);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "supersonic") return Regime::Supersonic;
  if (s == "subsonic") return Regime::Subsonic;
  if (s == "sonic") return Regime::Sonic;
  throw ConfigError("unknown regime label '" + std::string(label) + "'");
}

RegimeLabel classify(double mach, double tol) noexcept {
  if (std::abs(mach - 1.0) <= tol) return {Regime::Sonic, mach};
  return {mach > 1.0 ? Regime::Supersonic : Regime::Subsonic, mach};
}

double pressure(const ModelParams& params, Phase phase, double density) {
  require_positive(density, "density");
  return params.coefficient(phase) * detail::power(density, params.exponent(phase));
}

double pressure_derivative(const ModelParams& params, Phase phase, double density) {
  require_positive(density, "density");
  const double e = params.exponent(phase);
  return params.coefficient(phase) * e * detail::power(density, e - 1.0);
}

double pressure_second_derivative(const ModelParams& params, Phase phase, double density) {
  require_positive(density, "density");
  const double e = params.exponent(phase);
  return params.coefficient(phase) * e * (e - 1.0) * detail::power(density, e - 2.0);
}

double sound_speed(const ModelParams& params, double rho_plus, double n_plus) {
  require_positive(rho_plus, "rho_plus");
  require_positive(n_plus, "n_plus");
  const double num = params.A1() * params.gamma() * detail::power(rho_plus, params.gamma()) +
                     params.A2() * params.alpha() * detail::power(n_plus, params.alpha());
  return std::sqrt(num / (rho_plus + n_plus));
}

double mach_number(const ModelParams& params, const FarFieldData& far) {
  return std::abs(far.u_plus()) / sound_speed(params, far.rho_plus(), far.n_plus());
}

FarFieldData complete_far_field(const ModelParams& /*params*/, double rho_minus, double n_minus,
                                double u_minus, double u_plus) {
  require_positive(rho_minus, "rho_minus");
  require_positive(n_minus, "n_minus");
  require_positive(u_minus, "u_minus");
  require_positive(u_plus, "u_plus");
  // u- == u+ must give bit-identical end states.
  if (u_minus == u_plus) return FarFieldData(rho_minus, n_minus, u_minus, rho_minus, n_minus, u_plus);
  return FarFieldData(rho_minus, n_minus, u_minus, rho_minus * u_minus / u_plus,
                      n_minus * u_minus / u_plus, u_plus);
}

double sonic_stability_margin(const ModelParams& params, const FarFieldData& far) {
  const double rp = far.rho_plus();
  const double np = far.n_plus();
  const double dp1 = pressure_derivative(params, Phase::One, rp);
  const double dp2 = pressure_derivative(params, Phase::Two, np);
  const double lhs = std::abs(dp1 - dp2);
  const double first = (1.0 + rp / np) * std::sqrt((params.gamma() - 1.0) * dp1);
  const double second = (1.0 + np / rp) * std::sqrt((params.alpha() - 1.0) * dp2);
  const double rhs = std::sqrt(2.0) * far.u_plus() * std::min(first, second);
  return rhs - lhs;
}

}  // namespace twophase
