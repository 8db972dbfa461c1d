#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twophase/evolution.hpp"
#include "twophase/model.hpp"
#include "twophase/stationary.hpp"

namespace twophase {

inline constexpr int kConfigSchema = 1;

enum class Scenario { Classify, Stationary, Evolve, Sweep, Verify };

std::string_view to_string(Scenario s) noexcept;

struct EvolveConfig {
  double t_end = 100.0;
  double report_every = 1.0;
  PerturbationSpec perturbation;
  /// Also write the final state as a snapshot CSV.
  bool snapshot = true;
};

struct SweepConfig {
  std::vector<double> deltas;
};

struct VerifyConfig {
  int samples = 1000;
  int functions = 100;
};

struct RunConfig {
  ModelParams params{1.0, 1.0, 1.0, 1.0, 1.0};
  FarFieldData far{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  GridSpec grid;
  EvolveConfig evolve;
  SweepConfig sweep;
  VerifyConfig verify;
  /// FNV-1a 64 of the canonical (sorted-key, compact) JSON text.
  std::uint64_t hash = 0;
};

/// Parses and validates a configuration document for one scenario. Unknown
/// keys, missing required keys, wrong types and out-of-range values all
/// raise ConfigError.
RunConfig parse_config(const std::string& text, Scenario scenario);
RunConfig load_config(const std::string& path, Scenario scenario);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hash_hex(std::uint64_t h);

}  // namespace twophase
