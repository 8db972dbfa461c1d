#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "twophase/decay.hpp"
#include "twophase/evolution.hpp"
#include "twophase/spectrum.hpp"
#include "twophase/stationary.hpp"

namespace twophase {

/// `x,rho,u,n,v`, one row per node, 17 significant digits.
void write_profile_csv(std::ostream& out, const StationaryProfile& p);
/// `t,x,rho,u,n,v`.
void write_snapshot_csv(std::ostream& out, const EvolutionState& s);
/// `t,e_total,dissipation,l2,h1,sup`.
void write_timeseries_csv(std::ostream& out, const std::vector<EnergySample>& series);
/// `delta,ux0,vx0,ok,error`; the error column is quoted.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

nlohmann::json to_json(const SpectrumReport& s);
nlohmann::json to_json(const FitResult& f);
nlohmann::json to_json(const DecayReport& d);
nlohmann::json to_json(const SweepResult& s);
nlohmann::json to_json(const EnergyReport& e);
/// Scalar diagnostics of a profile (no node data).
nlohmann::json profile_summary(const StationaryProfile& p);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace twophase
