#include "twophase/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "twophase/errors.hpp"

namespace twophase {

using nlohmann::json;

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::Classify: return "classify";
    case Scenario::Stationary: return "stationary";
    case Scenario::Evolve: return "evolve";
    case Scenario::Sweep: return "sweep";
    case Scenario::Verify: return "verify";
  }
  return "?";
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) { return fmt::format("{:016x}", h); }

namespace {

const char* const kModelKeys[] = {"A1", "A2", "gamma", "alpha", "mu", "rho_minus", "n_minus", "u_minus", "u_plus"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(fmt::format("unknown key '{}' in {}", key, where));
  }
}

const json& require(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(fmt::format("missing required key '{}' in {}", key, where));
  return *it;
}

double number(const json& v, std::string_view name) {
  if (!v.is_number()) throw ConfigError(fmt::format("'{}' must be a number", name));
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(fmt::format("'{}' must be finite", name));
  return d;
}

double number_or(const json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, key);
}

long integer(const json& v, std::string_view name) {
  if (!v.is_number_integer()) throw ConfigError(fmt::format("'{}' must be an integer", name));
  return v.get<long>();
}

const json& object(const json& v, std::string_view name) {
  if (!v.is_object()) throw ConfigError(fmt::format("'{}' must be an object", name));
  return v;
}

void parse_grid(const json& g, GridSpec& grid) {
  object(g, "grid");
  reject_unknown(g, {"N", "L"}, "grid");
  if (auto it = g.find("N"); it != g.end()) {
    const long n = integer(*it, "grid.N");
    if (n < 16 || n > 10'000'000) throw ConfigError("grid.N must lie in [16, 1e7]");
    grid.nodes = static_cast<std::size_t>(n);
  }
  grid.length = number_or(g, "L", 0.0);
  if (grid.length < 0.0) throw ConfigError("grid.L must be nonnegative (0 selects the default)");
}

Bump parse_bump(const json& b, std::size_t index) {
  const std::string where = fmt::format("evolve.bumps[{}]", index);
  object(b, where);
  reject_unknown(b, {"field", "amplitude", "center", "width"}, where);
  Bump bump;
  const json& f = require(b, "field", where);
  if (!f.is_string()) throw ConfigError(where + ".field must be a string");
  bump.field = parse_field(f.get<std::string>());
  bump.amplitude = number(require(b, "amplitude", where), where + ".amplitude");
  bump.center = number(require(b, "center", where), where + ".center");
  bump.width = number(require(b, "width", where), where + ".width");
  if (!(bump.width > 0.0)) throw ConfigError(where + ".width must be positive");
  return bump;
}

void parse_evolve(const json& e, EvolveConfig& ev) {
  object(e, "evolve");
  reject_unknown(e, {"t_end", "report_every", "bumps", "max_h1", "snapshot"}, "evolve");
  ev.t_end = number(require(e, "t_end", "evolve"), "evolve.t_end");
  if (!(ev.t_end > 0.0)) throw ConfigError("evolve.t_end must be positive");
  ev.report_every = number_or(e, "report_every", ev.t_end / 100.0);
  if (!(ev.report_every > 0.0)) throw ConfigError("evolve.report_every must be positive");
  ev.perturbation.max_h1 = number_or(e, "max_h1", ev.perturbation.max_h1);
  if (!(ev.perturbation.max_h1 > 0.0)) throw ConfigError("evolve.max_h1 must be positive");
  if (auto it = e.find("bumps"); it != e.end()) {
    if (!it->is_array()) throw ConfigError("evolve.bumps must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) ev.perturbation.bumps.push_back(parse_bump((*it)[i], i));
  }
  if (auto it = e.find("snapshot"); it != e.end()) {
    if (!it->is_boolean()) throw ConfigError("evolve.snapshot must be a boolean");
    ev.snapshot = it->get<bool>();
  }
}

void parse_sweep(const json& s, SweepConfig& sw) {
  object(s, "sweep");
  reject_unknown(s, {"deltas"}, "sweep");
  const json& d = require(s, "deltas", "sweep");
  if (!d.is_array() || d.empty()) throw ConfigError("sweep.deltas must be a nonempty array");
  for (const json& v : d) {
    const double x = number(v, "sweep.deltas[]");
    if (x < 0.0) throw ConfigError("sweep.deltas entries must be nonnegative");
    sw.deltas.push_back(x);
  }
}

void parse_verify(const json& v, VerifyConfig& vc) {
  object(v, "verify");
  reject_unknown(v, {"samples", "functions"}, "verify");
  if (auto it = v.find("samples"); it != v.end()) vc.samples = static_cast<int>(integer(*it, "verify.samples"));
  if (auto it = v.find("functions"); it != v.end())
    vc.functions = static_cast<int>(integer(*it, "verify.functions"));
  if (vc.samples < 1 || vc.functions < 1) throw ConfigError("verify counts must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& text, Scenario scenario) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  std::set<std::string> allowed{"schema", "grid", "regime", "evolve", "sweep", "verify"};
  for (const char* k : kModelKeys) allowed.insert(k);
  reject_unknown(doc, allowed, "config");

  const long schema = integer(require(doc, "schema", "config"), "schema");
  if (schema != kConfigSchema)
    throw ConfigError(fmt::format("unsupported schema {} (expected {})", schema, kConfigSchema));

  double m[9];
  for (int i = 0; i < 9; ++i) m[i] = number(require(doc, kModelKeys[i], "config"), kModelKeys[i]);

  RunConfig cfg;
  try {
    cfg.params = ModelParams(m[0], m[1], m[2], m[3], m[4]);
    cfg.far = complete_far_field(cfg.params, m[5], m[6], m[7], m[8]);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  if (auto it = doc.find("grid"); it != doc.end()) parse_grid(*it, cfg.grid);
  if (auto it = doc.find("regime"); it != doc.end()) {
    if (!it->is_string()) throw ConfigError("'regime' must be a string");
    try {
      cfg.grid.force_regime = parse_regime(it->get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }

  const json* ev = doc.contains("evolve") ? &doc["evolve"] : nullptr;
  const json* sw = doc.contains("sweep") ? &doc["sweep"] : nullptr;
  if (scenario == Scenario::Evolve && !ev) throw ConfigError("missing required key 'evolve' in config");
  if (scenario == Scenario::Sweep && !sw) throw ConfigError("missing required key 'sweep' in config");
  if (ev) parse_evolve(*ev, cfg.evolve);
  if (sw) parse_sweep(*sw, cfg.sweep);
  if (auto it = doc.find("verify"); it != doc.end()) parse_verify(*it, cfg.verify);

  cfg.hash = fnv1a64(doc.dump());
  return cfg;
}

RunConfig load_config(const std::string& path, Scenario scenario) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), scenario);
}

}  // namespace twophase
