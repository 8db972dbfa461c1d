#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "twophase/commands.hpp"
#include "twophase/config.hpp"
#include "twophase/errors.hpp"

using namespace twophase;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("twophase_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

json base(double u_minus, double u_plus) {
  return {{"schema", 1}, {"A1", 1.0}, {"A2", 1.0}, {"gamma", 1.0}, {"alpha", 1.0}, {"mu", 1.0},
          {"rho_minus", u_plus / u_minus}, {"n_minus", u_plus / u_minus}, {"u_minus", u_minus}, {"u_plus", u_plus}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code;
  std::string log, err;
};

Outcome invoke(Scenario sc, const json& cfg, const TempDir& dir, const std::string& force = "") {
  const fs::path file = dir.path / "config.json";
  std::ofstream(file) << cfg.dump(2);
  CommandOptions opts;
  opts.out_dir = (dir.path / "out").string();
  std::ostringstream log, err;
  const int code = run_command(sc, file.string(), force, opts, log, err);
  return {code, log.str(), err.str()};
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(base(0.499, 0.5).dump(), Scenario::Stationary);
  CHECK(c.far.u_minus() == 0.499);
  CHECK(c.far.u_plus() == 0.5);
  CHECK(c.far.rho_plus() == doctest::Approx(1.0));
  CHECK(c.grid.nodes == 4096);

  json unknown = base(1, 1);
  unknown["viscosity"] = 1.0;
  CHECK_THROWS_AS(parse_config(unknown.dump(), Scenario::Classify), ConfigError);
  json no_schema = base(1, 1);
  no_schema.erase("schema");
  CHECK_THROWS_AS(parse_config(no_schema.dump(), Scenario::Classify), ConfigError);
  json bad_schema = base(1, 1);
  bad_schema["schema"] = 2;
  CHECK_THROWS_AS(parse_config(bad_schema.dump(), Scenario::Classify), ConfigError);
  json wrong_type = base(1, 1);
  wrong_type["mu"] = "one";
  CHECK_THROWS_AS(parse_config(wrong_type.dump(), Scenario::Classify), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json", Scenario::Classify), ConfigError);
  CHECK_THROWS_AS(parse_config(base(1, 1).dump(), Scenario::Evolve), ConfigError);
  CHECK_THROWS_AS(parse_config(base(1, 1).dump(), Scenario::Sweep), ConfigError);

  // Key order and whitespace do not change the hash.
  const json a = base(0.499, 0.5);
  CHECK(parse_config(a.dump(), Scenario::Classify).hash == parse_config(a.dump(4), Scenario::Classify).hash);
  CHECK(parse_config(a.dump(), Scenario::Classify).hash != parse_config(base(0.5, 0.5).dump(), Scenario::Classify).hash);
  CHECK(hash_hex(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("classify") {
  TempDir dir("classify");
  const Outcome o = invoke(Scenario::Classify, base(1, 1), dir);
  REQUIRE(o.code == kExitOk);
  const json j = json::parse(slurp(dir.path / "out" / "spectrum.json"));
  CHECK(j["spectrum"]["regime"] == "Sonic");
  const auto& ev = j["spectrum"]["eigenvalues"];
  CHECK(std::abs(ev[0]["re"].get<double>() - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(ev[1]["re"].get<double>() + std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(ev[2]["re"].get<double>()) < 1e-12);
  CHECK(j["config_hash"].get<std::string>().size() == 16);

  const Outcome sup = invoke(Scenario::Classify, base(2, 2), dir);
  CHECK(sup.code == kExitOk);
  CHECK(json::parse(slurp(dir.path / "out" / "spectrum.json"))["spectrum"]["regime"] == "Supersonic");

  json missing = base(1, 1);
  missing.erase("mu");
  const Outcome m = invoke(Scenario::Classify, missing, dir);
  CHECK(m.code == kExitConfig);
  CHECK(m.err.find("mu") != std::string::npos);

  CHECK(invoke(Scenario::Classify, base(1, 1), dir, "sideways").code == kExitConfig);
}

TEST_CASE("stationary") {
  TempDir dir("stationary");
  json flat = base(0.5, 0.5);
  flat["grid"] = {{"N", 64}, {"L", 10}};
  REQUIRE(invoke(Scenario::Stationary, flat, dir).code == kExitOk);
  std::istringstream csv(slurp(dir.path / "out" / "profile.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x,rho,u,n,v");
  int rows = 0;
  while (std::getline(csv, line)) {
    CHECK(line.substr(line.find(',')) == ",1,0.5,1,0.5");
    ++rows;
  }
  CHECK(rows == 64);
  CHECK(json::parse(slurp(dir.path / "out" / "decay.json"))["decay"]["trivial"] == true);

  json sub = base(0.499, 0.5);
  sub["grid"] = {{"N", 2048}};
  REQUIRE(invoke(Scenario::Stationary, sub, dir).code == kExitOk);
  CHECK(json::parse(slurp(dir.path / "out" / "decay.json"))["decay"]["selected"] == "exponential");

  json sup = base(1.999, 2.0);
  sup["grid"] = {{"N", 512}};
  const Outcome o = invoke(Scenario::Stationary, sup, dir);
  CHECK(o.code == kExitNoProfile);
  CHECK(o.err.find("no stationary profile") != std::string::npos);
}

TEST_CASE("evolve") {
  TempDir dir("evolve");
  json cfg = base(0.499, 0.5);
  cfg["grid"] = {{"N", 257}, {"L", 40}};
  cfg["evolve"] = {{"t_end", 2.0}, {"report_every", 0.5},
                   {"bumps", json::array({{{"field", "u"}, {"amplitude", 1e-3}, {"center", 20.0}, {"width", 2.0}}})}};
  const Outcome o = invoke(Scenario::Evolve, cfg, dir);
  REQUIRE(o.code == kExitOk);
  CHECK(o.log.find("sup_norm initial=") != std::string::npos);
  const json j = json::parse(slurp(dir.path / "out" / "evolve.json"));
  CHECK(j["final"]["sup"].get<double>() < j["initial"]["sup"].get<double>());
  CHECK(fs::exists(dir.path / "out" / "snapshot.csv"));
  CHECK(slurp(dir.path / "out" / "timeseries.csv").rfind("t,e_total,dissipation,l2,h1,sup\n", 0) == 0);

  cfg["evolve"]["bumps"][0]["amplitude"] = 0.5;
  CHECK(invoke(Scenario::Evolve, cfg, dir).code == kExitConfig);
  cfg["evolve"]["bumps"][0]["field"] = "w";
  CHECK(invoke(Scenario::Evolve, cfg, dir).code == kExitConfig);
}

TEST_CASE("sweep") {
  TempDir dir("sweep");
  json cfg = base(0.499, 0.5);
  cfg["grid"] = {{"N", 1024}};
  cfg["sweep"] = {{"deltas", {0.0, 1e-3, 5e-4}}};
  const Outcome o = invoke(Scenario::Sweep, cfg, dir);
  REQUIRE(o.code == kExitOk);
  const json j = json::parse(slurp(dir.path / "out" / "sweep.json"));
  const double p = j["sweep"]["fit"]["rate_or_slope"].get<double>();
  CHECK(std::abs(p - 1.0) < 0.1);
  const std::string csv = slurp(dir.path / "out" / "sweep.csv");
  CHECK(csv.rfind("delta,ux0,vx0,ok,error\n0,0,0,1,\"\"\n", 0) == 0);

  json bad = base(1.999, 2.0);
  bad["grid"] = {{"N", 256}};
  bad["sweep"] = {{"deltas", {1e-3, 2e-3}}};
  CHECK(invoke(Scenario::Sweep, bad, dir).code == kExitNoProfile);
}

TEST_CASE("verify") {
  TempDir dir("verify");
  json cfg = base(0.5, 0.5);
  cfg["verify"] = {{"samples", 100}, {"functions", 10}};
  const Outcome o = invoke(Scenario::Verify, cfg, dir);
  CHECK(o.code == kExitOk);
  CHECK(json::parse(slurp(dir.path / "out" / "verify.json"))["all_passed"] == true);
}

TEST_CASE("identical config and seed give identical bytes") {
  TempDir a("det_a"), b("det_b");
  json cfg = base(0.499, 0.5);
  cfg["grid"] = {{"N", 512}};
  cfg["sweep"] = {{"deltas", {1e-3, 5e-4}}};
  for (Scenario sc : {Scenario::Stationary, Scenario::Sweep}) {
    REQUIRE(invoke(sc, cfg, a).code == kExitOk);
    REQUIRE(invoke(sc, cfg, b).code == kExitOk);
  }
  for (const char* name : {"profile.csv", "decay.json", "sweep.csv", "sweep.json"})
    CHECK(slurp(a.path / "out" / name) == slurp(b.path / "out" / name));
}

TEST_CASE("shipped configs parse") {
  const fs::path dir = TWOPHASE_CONFIG_DIR;
  CHECK_NOTHROW(load_config((dir / "sonic.json").string(), Scenario::Stationary));
  CHECK_NOTHROW(load_config((dir / "subsonic.json").string(), Scenario::Stationary));
  CHECK_NOTHROW(load_config((dir / "supersonic.json").string(), Scenario::Classify));
  CHECK_NOTHROW(load_config((dir / "evolve_subsonic.json").string(), Scenario::Evolve));
  CHECK_NOTHROW(load_config((dir / "sweep_subsonic.json").string(), Scenario::Sweep));
  CHECK_THROWS_AS(load_config((dir / "missing.json").string(), Scenario::Classify), ConfigError);
}
