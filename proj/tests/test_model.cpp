#include <doctest.h>

#include <cmath>
#include <random>

#include "twophase/errors.hpp"
#include "twophase/model.hpp"

using namespace twophase;
using doctest::Approx;

TEST_CASE("params are validated on construction") {
  CHECK_NOTHROW(ModelParams(1, 1, 1, 1, 1));
  CHECK_THROWS_AS(ModelParams(0, 1, 1, 1, 1), DomainError);
  CHECK_THROWS_AS(ModelParams(1, -1, 1, 1, 1), DomainError);
  CHECK_THROWS_AS(ModelParams(1, 1, 0.9, 1, 1), DomainError);
  CHECK_THROWS_AS(ModelParams(1, 1, 1, 0.5, 1), DomainError);
  CHECK_THROWS_AS(ModelParams(1, 1, 1, 1, 0), DomainError);
  CHECK_THROWS_AS(ModelParams(1, 1, NAN, 1, 1), DomainError);
}

TEST_CASE("pressure laws") {
  CHECK(pressure(ModelParams(1, 1, 1, 1, 1), Phase::One, 3.0) == Approx(3.0));
  CHECK(pressure(ModelParams(1, 1, 2, 1, 1), Phase::One, 1.0) == Approx(1.0));
  CHECK(pressure(ModelParams(1, 0.5, 1, 2, 1), Phase::Two, 2.0) == Approx(2.0));
  CHECK_THROWS_AS(pressure(ModelParams(1, 1, 1, 1, 1), Phase::One, 0.0), DomainError);

  CHECK(pressure_derivative(ModelParams(1, 1, 1, 1, 1), Phase::One, 7.0) == Approx(1.0));
  CHECK(pressure_derivative(ModelParams(2, 1, 2, 1, 1), Phase::One, 1.0) == Approx(4.0));
  CHECK(pressure_derivative(ModelParams(1, 1, 1, 3, 1), Phase::Two, 2.0) == Approx(12.0));
  CHECK_THROWS_AS(pressure_derivative(ModelParams(1, 1, 1, 1, 1), Phase::Two, -1.0), DomainError);
}

TEST_CASE("pressure derivative matches centered differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.2, 5.0), E(1.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const ModelParams p(U(rng), U(rng), E(rng), E(rng), U(rng));
    for (Phase ph : {Phase::One, Phase::Two}) {
      const double d = U(rng), h = 1e-6 * d;
      const double fd = (pressure(p, ph, d + h) - pressure(p, ph, d - h)) / (2 * h);
      const double exact = pressure_derivative(p, ph, d);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
    }
  }
}

TEST_CASE("sound speed and Mach number") {
  CHECK(sound_speed(ModelParams(1, 1, 1, 1, 1), 0.3, 7.0) == Approx(1.0).epsilon(1e-14));
  CHECK(sound_speed(ModelParams(2, 2, 1, 1, 1), 3.0, 0.5) == Approx(std::sqrt(2.0)).epsilon(1e-14));
  const ModelParams mixed(1, 0.5, 1.4, 2, 1);
  CHECK(sound_speed(mixed, 1.0, 2.0) == Approx(std::sqrt(5.4 / 3.0)).epsilon(1e-14));
  CHECK(sound_speed(mixed, 1.0, 2.0) == Approx(1.341641).epsilon(1e-6));

  const ModelParams unit(1, 1, 1, 1, 1);
  CHECK(mach_number(unit, complete_far_field(unit, 1, 1, 2, 2)) == Approx(2.0));
  CHECK(mach_number(mixed, complete_far_field(mixed, 1, 2, 1, 1)) == Approx(0.745356).epsilon(1e-6));
  const double c = sound_speed(mixed, 1.0, 2.0);
  CHECK(mach_number(mixed, complete_far_field(mixed, 1, 2, c, c)) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mach number is invariant under density scaling only for linear pressures") {
  const ModelParams lin(1.3, 0.7, 1, 1, 1), nonlin(1.3, 0.7, 1.4, 2, 1);
  for (double lambda : {0.1, 2.0, 17.0}) {
    const double m0 = mach_number(lin, complete_far_field(lin, 1.2, 0.8, 1.5, 1.5));
    const double m1 = mach_number(lin, complete_far_field(lin, 1.2 * lambda, 0.8 * lambda, 1.5, 1.5));
    CHECK(m1 == Approx(m0).epsilon(1e-14));
    const double q0 = mach_number(nonlin, complete_far_field(nonlin, 1.2, 0.8, 1.5, 1.5));
    const double q1 = mach_number(nonlin, complete_far_field(nonlin, 1.2 * lambda, 0.8 * lambda, 1.5, 1.5));
    CHECK(std::abs(q1 - q0) > 1e-3 * q0);
  }
}

TEST_CASE("far field completion") {
  const ModelParams p(1, 1, 1, 1, 1);
  auto f = complete_far_field(p, 2, 4, 1, 1);
  CHECK(f.rho_plus() == 2.0);
  CHECK(f.n_plus() == 4.0);
  CHECK(f.delta() == 0.0);
  f = complete_far_field(p, 2, 4, 1, 2);
  CHECK(f.rho_plus() == Approx(1.0));
  CHECK(f.n_plus() == Approx(2.0));
  CHECK(f.delta() == Approx(1.0));
  f = complete_far_field(p, 1, 1, 3, 1);
  CHECK(f.rho_plus() == Approx(3.0));
  CHECK(f.n_plus() == Approx(3.0));
  CHECK(f.delta() == Approx(2.0));
  CHECK(f.offset() == Approx(2.0));
  CHECK_THROWS_AS(complete_far_field(p, 0, 1, 1, 1), DomainError);
  CHECK_THROWS_AS(complete_far_field(p, 1, 1, 1, -1), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.1, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double rm = U(rng), nm = U(rng), um = U(rng), up = U(rng);
    const auto g = complete_far_field(p, rm, nm, um, up);
    CHECK(std::abs(g.rho_plus() * up - rm * um) <= 1e-15 * rm * um);
    CHECK(std::abs(g.n_plus() * up - nm * um) <= 1e-15 * nm * um);
    CHECK(g.delta() == std::abs(up - um));
  }
}

TEST_CASE("far field data rejects incompatible fluxes") {
  CHECK_NOTHROW(FarFieldData(2, 4, 1, 1, 2, 2));
  CHECK_THROWS_AS(FarFieldData(2, 4, 1, 1.1, 2, 2), DomainError);
  CHECK_THROWS_AS(FarFieldData(2, 4, 1, 1, 2.1, 2), DomainError);
  CHECK_THROWS_AS(FarFieldData(2, 4, 0, 1, 2, 2), DomainError);
}

TEST_CASE("regime labels") {
  CHECK(classify(1.0).tag == Regime::Sonic);
  CHECK(classify(1.0 + 5e-10).tag == Regime::Sonic);
  CHECK(classify(1.0 + 2e-9).tag == Regime::Supersonic);
  CHECK(classify(1.0 - 2e-9).tag == Regime::Subsonic);
  CHECK(parse_regime("Sonic") == Regime::Sonic);
  CHECK(parse_regime(to_string(Regime::Supersonic)) == Regime::Supersonic);
  CHECK(parse_regime(to_string(Regime::Subsonic)) == Regime::Subsonic);
  CHECK_THROWS_AS(parse_regime("transonic"), ConfigError);
}

TEST_CASE("sonic stability margin") {
  const ModelParams unit(1, 1, 1, 1, 1);
  CHECK(sonic_stability_margin(unit, complete_far_field(unit, 1, 1, 1, 1)) == Approx(0.0));
  const ModelParams split(1, 2, 1, 1, 1);
  CHECK(sonic_stability_margin(split, complete_far_field(split, 1, 1, 1, 1)) == Approx(-1.0));
  const ModelParams quad(1, 1, 2, 2, 1);
  CHECK(sonic_stability_margin(quad, complete_far_field(quad, 1, 1, 1, 1)) == Approx(4.0));
}
