#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "twophase/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"twophase: stationary inflow profiles and stability runs for the two-phase flow model"};
  app.require_subcommand(1);

  std::string config;
  std::string force_regime;
  twophase::CommandOptions opts;

  struct Entry {
    const char* name;
    const char* help;
    twophase::Scenario scenario;
  };
  const Entry entries[] = {
      {"classify", "Mach number, far-field spectrum and regime", twophase::Scenario::Classify},
      {"stationary", "Stationary profile CSV and decay report", twophase::Scenario::Stationary},
      {"evolve", "Perturbed time integration with energy diagnostics", twophase::Scenario::Evolve},
      {"sweep", "Boundary slope |u_x(0)| against delta", twophase::Scenario::Sweep},
      {"verify", "Randomized property suite", twophase::Scenario::Verify},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config, "JSON configuration file")->required();
    sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", opts.seed, "Seed for randomized suites")->capture_default_str();
    sub->add_option("--force-regime", force_regime, "Override the solver branch (supersonic|subsonic|sonic)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : twophase::kExitConfig;
  }

  for (const auto& e : entries) {
    if (app.got_subcommand(e.name))
      return twophase::run_command(e.scenario, config, force_regime, opts, std::cout, std::cerr);
  }
  return twophase::kExitConfig;
}
