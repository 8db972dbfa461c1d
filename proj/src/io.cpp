#include "twophase/io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace twophase {

using nlohmann::json;

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json cvec_json(const CVec3& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(complex_json(z));
  return a;
}

}  // namespace

void write_profile_csv(std::ostream& out, const StationaryProfile& p) {
  out << "x,rho,u,n,v\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.x[i], p.rho[i], p.u[i], p.n[i], p.v[i]);
}

void write_snapshot_csv(std::ostream& out, const EvolutionState& s) {
  out << "t,x,rho,u,n,v\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.time, s.x[i], s.rho[i], s.u[i], s.n[i],
               s.v[i]);
}

void write_timeseries_csv(std::ostream& out, const std::vector<EnergySample>& series) {
  out << "t,e_total,dissipation,l2,h1,sup\n";
  for (const auto& s : series)
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t, s.report.e_total,
               s.report.dissipation, s.report.l2_norm, s.report.h1_norm, s.report.sup_norm);
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "delta,ux0,vx0,ok,error\n";
  for (const auto& r : sweep.rows)
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{},{}\n", r.delta, r.ux0, r.vx0, r.ok ? 1 : 0, csv_quote(r.error));
}

json to_json(const SpectrumReport& s) {
  json j;
  j["regime"] = std::string(to_string(s.regime.tag));
  j["mach"] = s.regime.mach;
  j["eigenvalues"] = cvec_json(s.lambda);
  j["eigenvalues_descending"] = cvec_json(s.descending);
  json right = json::array(), left = json::array();
  for (int i = 0; i < 3; ++i) {
    right.push_back(cvec_json(s.right[i]));
    left.push_back(cvec_json(s.left[i]));
  }
  j["right_eigenvectors"] = right;
  j["left_eigenvectors"] = left;
  j["trace"] = s.trace;
  j["determinant"] = s.determinant;
  j["second_invariant"] = s.second_invariant;
  j["invariant_residuals"] = {{"sum", s.residuals.sum}, {"product", s.residuals.product},
                              {"pairwise", s.residuals.pairwise}};
  j["printed_relations"] = {{"product", s.printed.product},         {"sum", s.printed.sum},
                            {"pairwise", s.printed.pairwise},       {"product_gap", s.printed.product_gap},
                            {"sum_gap", s.printed.sum_gap},         {"pairwise_gap", s.printed.pairwise_gap}};
  return j;
}

json to_json(const FitResult& f) {
  json j{{"model", std::string(to_string(f.model))},
         {"rate_or_slope", f.rate_or_slope},
         {"intercept", f.intercept},
         {"r_squared", f.r_squared},
         {"window", {f.window.lo, f.window.hi}},
         {"points", f.points},
         {"low_confidence", f.low_confidence}};
  if (f.model == FitModel::Algebraic) {
    j["loglog_exponent"] = f.loglog_exponent;
    j["loglog_r_squared"] = f.loglog_r_squared;
  }
  return j;
}

json to_json(const DecayReport& d) {
  json j;
  j["trivial"] = d.trivial;
  j["regime"] = std::string(to_string(d.regime));
  j["delta"] = d.delta;
  j["warnings"] = d.warnings;
  if (d.trivial) return j;
  j["exponential"] = to_json(d.exponential);
  j["algebraic"] = to_json(d.algebraic);
  j["selected"] = std::string(to_string(d.selected));
  j["expected"] = d.expected;
  j["fitted"] = d.fitted;
  j["relative_error"] = d.relative_error;
  j["rate_ok"] = d.rate_ok;
  j["amplitude_bound"] = d.amplitude_bound;
  if (d.regime == Regime::Sonic) {
    j["center"] = to_json(d.center);
    j["loglog_exponent"] = d.loglog_exponent;
    j["exponent_ok"] = d.exponent_ok;
  }
  return j;
}

json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"delta", r.delta}, {"ux0", r.ux0}, {"vx0", r.vx0}, {"ok", r.ok}, {"error", r.error}});
  json j{{"rows", rows}, {"fit_valid", s.fit_valid}, {"max_ratio", s.max_ratio}};
  if (s.fit_valid) {
    j["exponent"] = s.fit.rate_or_slope;
    j["fit"] = to_json(s.fit);
  }
  return j;
}

json to_json(const EnergyReport& e) {
  return {{"e_total", e.e_total}, {"dissipation", e.dissipation}, {"l2", e.l2_norm}, {"h1", e.h1_norm},
          {"sup", e.sup_norm}};
}

json profile_summary(const StationaryProfile& p) {
  json j{{"regime", std::string(to_string(p.regime.tag))},
         {"mach", p.regime.mach},
         {"solver", std::string(to_string(p.solver))},
         {"nodes", p.size()},
         {"length", p.length},
         {"delta", p.delta},
         {"rho_plus", p.rho_plus},
         {"n_plus", p.n_plus},
         {"u_plus", p.u_plus},
         {"shooting_params", p.shooting_params},
         {"iterations", p.iterations},
         {"residual_norm", p.residual_norm},
         {"boundary_mismatch", p.boundary_mismatch},
         {"flux_error", p.flux_error},
         {"tail_deviation", p.tail_deviation}};
  if (p.size() > 0) {
    j["ux0"] = p.ux.front();
    j["vx0"] = p.vx.front();
  }
  if (p.solver == Regime::Sonic && !p.trivial()) j["junction_jump"] = p.junction_jump;
  if (p.center) j["center_manifold"] = {{"a", p.center->a}, {"b", p.center->b}, {"sigma0", p.center->sigma0}};
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path fp(path);
  if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
  std::ofstream out(fp, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

}  // namespace twophase
