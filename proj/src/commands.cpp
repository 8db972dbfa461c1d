#include "twophase/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <ostream>
#include <sstream>

#include "twophase/decay.hpp"
#include "twophase/errors.hpp"
#include "twophase/io.hpp"
#include "twophase/spectrum.hpp"
#include "twophase/verify.hpp"

namespace twophase {

using nlohmann::json;

namespace {

std::string out_path(const CommandOptions& opts, const char* name) {
  return (std::filesystem::path(opts.out_dir) / name).string();
}

json header(const RunConfig& cfg, Scenario s) {
  return {{"command", std::string(to_string(s))}, {"config_hash", hash_hex(cfg.hash)}, {"schema", kConfigSchema}};
}

void write_json(const CommandOptions& opts, const char* name, const json& j) {
  write_file(out_path(opts, name), j.dump(2) + "\n");
}

/// Spectrum of the branch the solver will use (forced label if any).
SpectrumReport spectrum_for(const RunConfig& cfg) {
  const RegimeLabel label = classify(cfg.params, cfg.far);
  if (!cfg.grid.force_regime || *cfg.grid.force_regime == label.tag) return eigen_spectrum(cfg.params, cfg.far);
  return eigen_spectrum(make_jacobian(assemble_jacobian(cfg.params, cfg.far).entries,
                                      RegimeLabel{*cfg.grid.force_regime, label.mach}));
}

}  // namespace

int cmd_classify(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  json j = header(cfg, Scenario::Classify);
  const SpectrumReport s = spectrum_for(cfg);
  j["spectrum"] = to_json(s);
  j["sonic_stability_margin"] = sonic_stability_margin(cfg.params, cfg.far);
  write_json(opts, "spectrum.json", j);
  log << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_stationary(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const StationaryProfile p = solve_stationary(cfg.params, cfg.far, cfg.grid);
  std::ostringstream csv;
  write_profile_csv(csv, p);
  write_file(out_path(opts, "profile.csv"), csv.str());

  json j = header(cfg, Scenario::Stationary);
  j["profile"] = profile_summary(p);
  const SpectrumReport s = spectrum_for(cfg);
  j["spectrum"] = to_json(s);
  const DecayReport d = decay_report(p, s, cfg.far.delta());
  j["decay"] = to_json(d);
  write_json(opts, "decay.json", j);
  fmt::print(log, "stationary {}: N={} L={:.6g} mismatch={:.3e} flux={:.3e}", to_string(p.solver), p.size(), p.length,
             p.boundary_mismatch, p.flux_error);
  if (!d.trivial)
    fmt::print(log, " selected={} fitted={:.6g} expected={:.6g}", to_string(d.selected), d.fitted, d.expected);
  log << "\n";
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const StationaryProfile p = solve_stationary(cfg.params, cfg.far, cfg.grid);
  const InflowData in = inflow_data(cfg.far);
  const EvolutionState s0 = init_state(p, cfg.evolve.perturbation, in);
  const RunResult res = run(s0, cfg.params, p, in, cfg.evolve.t_end, cfg.evolve.report_every);

  std::ostringstream ts;
  write_timeseries_csv(ts, res.series);
  write_file(out_path(opts, "timeseries.csv"), ts.str());
  if (cfg.evolve.snapshot) {
    std::ostringstream snap;
    write_snapshot_csv(snap, res.final_state);
    write_file(out_path(opts, "snapshot.csv"), snap.str());
  }
  const EnergyReport& first = res.series.front().report;
  const EnergyReport& last = res.series.back().report;
  json j = header(cfg, Scenario::Evolve);
  j["profile"] = profile_summary(p);
  j["initial"] = to_json(first);
  j["final"] = to_json(last);
  j["t_end"] = res.final_state.time;
  j["steps"] = res.steps;
  j["retries"] = res.retries;
  j["mass_drift"] = res.mass_drift;
  write_json(opts, "evolve.json", j);
  fmt::print(log, "evolve: t={:.6g} steps={} sup_norm initial={:.6e} final={:.6e} mass_drift={:.3e}\n",
             res.final_state.time, res.steps, first.sup_norm, last.sup_norm, res.mass_drift);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const SweepResult sw = boundary_slope_sweep(cfg.params, cfg.far, cfg.sweep.deltas, cfg.grid);
  std::ostringstream csv;
  write_sweep_csv(csv, sw);
  write_file(out_path(opts, "sweep.csv"), csv.str());
  json j = header(cfg, Scenario::Sweep);
  j["sweep"] = to_json(sw);
  write_json(opts, "sweep.json", j);
  const bool any_ok = std::any_of(sw.rows.begin(), sw.rows.end(), [](const SweepRow& r) { return r.ok; });
  if (sw.fit_valid)
    fmt::print(log, "sweep: {} rows, exponent={:.6f}, max |ux(0)|/delta={:.6g}\n", sw.rows.size(),
               sw.fit.rate_or_slope, sw.max_ratio);
  else
    fmt::print(log, "sweep: {} rows, no exponent fit\n", sw.rows.size());
  if (!any_ok) throw NoProfileError("every sweep row failed", 0.0);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const VerifyReport rep = run_property_suite(cfg, opts.seed);
  json j = header(cfg, Scenario::Verify);
  j["seed"] = opts.seed;
  json props = json::array();
  for (const auto& p : rep.properties) {
    props.push_back({{"name", p.name},
                     {"passed", p.passed},
                     {"cases", p.cases},
                     {"worst", p.worst},
                     {"tolerance", p.tolerance},
                     {"detail", p.detail}});
    fmt::print(log, "{} {} (cases={}, worst={:.3e}, tol={:.1e}) {}\n", p.passed ? "PASS" : "FAIL", p.name, p.cases,
               p.worst, p.tolerance, p.detail);
  }
  j["properties"] = props;
  j["all_passed"] = rep.all_passed();
  write_json(opts, "verify.json", j);
  return rep.all_passed() ? kExitOk : kExitFailure;
}

int run_command(Scenario scenario, const std::string& config_path, const std::string& force_regime,
                const CommandOptions& opts, std::ostream& log, std::ostream& err) {
  try {
    RunConfig cfg = load_config(config_path, scenario);
    if (!force_regime.empty()) cfg.grid.force_regime = parse_regime(force_regime);
    switch (scenario) {
      case Scenario::Classify: return cmd_classify(cfg, opts, log);
      case Scenario::Stationary: return cmd_stationary(cfg, opts, log);
      case Scenario::Evolve: return cmd_evolve(cfg, opts, log);
      case Scenario::Sweep: return cmd_sweep(cfg, opts, log);
      case Scenario::Verify: return cmd_verify(cfg, opts, log);
    }
    return kExitFailure;
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const RejectedPerturbation& e) {
    fmt::print(err, "perturbation rejected: {}\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    fmt::print(err, "invalid input: {}\n", e.what());
    return kExitConfig;
  } catch (const NoProfileError& e) {
    fmt::print(err, "no stationary profile: {}\n", e.what());
    return kExitNoProfile;
  } catch (const StructuralError& e) {
    fmt::print(err, "spectrum inconsistent with regime: {}\n", e.what());
    return kExitNoProfile;
  } catch (const BlowUpError& e) {
    fmt::print(err, "blow-up: {}\n", e.what());
    return kExitBlowUp;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
}

}  // namespace twophase
