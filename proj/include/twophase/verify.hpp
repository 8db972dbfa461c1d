#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "twophase/config.hpp"

namespace twophase {

struct PropertyResult {
  std::string name;
  bool passed = false;
  int cases = 0;
  /// Worst observed metric and the bound it is held to.
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  bool all_passed() const noexcept;
};

/// Random valid (params, far field) with Mach number away from 1 by at
/// least `sonic_gap`. Far field only: u- = u+.
struct RandomModel {
  ModelParams params;
  FarFieldData far;
};
RandomModel random_model(std::mt19937_64& rng, double sonic_gap = 1e-6);

/// Fast randomized property suite: eigenvalue invariants, the regime sign
/// table, weighted inequalities, relative-entropy closed forms, fit scale
/// equivariance and a well-balanced run of the configured far field.
VerifyReport run_property_suite(const RunConfig& cfg, std::uint64_t seed);

}  // namespace twophase
