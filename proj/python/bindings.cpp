#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "twophase/decay.hpp"
#include "twophase/errors.hpp"
#include "twophase/evolution.hpp"
#include "twophase/inequality.hpp"
#include "twophase/io.hpp"
#include "twophase/spectrum.hpp"
#include "twophase/stationary.hpp"

namespace py = pybind11;
using namespace twophase;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

GridSpec grid_spec(std::size_t nodes, double length, const std::optional<std::string>& force_regime) {
  GridSpec g;
  g.nodes = nodes;
  g.length = length;
  if (force_regime) g.force_regime = parse_regime(*force_regime);
  return g;
}

py::dict profile_dict(const StationaryProfile& p) {
  py::dict d;
  d["x"] = as_array(p.x);
  d["rho"] = as_array(p.rho);
  d["u"] = as_array(p.u);
  d["n"] = as_array(p.n);
  d["v"] = as_array(p.v);
  d["ux"] = as_array(p.ux);
  d["vx"] = as_array(p.vx);
  d["summary"] = profile_summary(p).dump();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stationary inflow profiles and stability runs for a viscous two-phase flow model.";

  py::register_exception<NoProfileError>(m, "NoProfileError");
  py::register_exception<BlowUpError>(m, "BlowUpError");
  py::register_exception<StructuralError>(m, "StructuralError");
  py::register_exception<RejectedPerturbation>(m, "RejectedPerturbation", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double, double, double>(), py::arg("A1"), py::arg("A2"), py::arg("gamma"),
           py::arg("alpha"), py::arg("mu"))
      .def_property_readonly("A1", &ModelParams::A1)
      .def_property_readonly("A2", &ModelParams::A2)
      .def_property_readonly("gamma", &ModelParams::gamma)
      .def_property_readonly("alpha", &ModelParams::alpha)
      .def_property_readonly("mu", &ModelParams::mu);

  py::class_<FarFieldData>(m, "FarFieldData")
      .def_property_readonly("rho_minus", &FarFieldData::rho_minus)
      .def_property_readonly("n_minus", &FarFieldData::n_minus)
      .def_property_readonly("u_minus", &FarFieldData::u_minus)
      .def_property_readonly("rho_plus", &FarFieldData::rho_plus)
      .def_property_readonly("n_plus", &FarFieldData::n_plus)
      .def_property_readonly("u_plus", &FarFieldData::u_plus)
      .def_property_readonly("delta", &FarFieldData::delta);

  m.def("complete_far_field", &complete_far_field, py::arg("params"), py::arg("rho_minus"), py::arg("n_minus"),
        py::arg("u_minus"), py::arg("u_plus"));
  m.def("mach_number", &mach_number, py::arg("params"), py::arg("far"));
  m.def("sonic_stability_margin", &sonic_stability_margin, py::arg("params"), py::arg("far"));
  m.def(
      "classify",
      [](const ModelParams& p, const FarFieldData& f) {
        const RegimeLabel l = classify(p, f);
        return py::make_tuple(std::string(to_string(l.tag)), l.mach);
      },
      py::arg("params"), py::arg("far"));
  m.def(
      "_spectrum_json", [](const ModelParams& p, const FarFieldData& f) { return to_json(eigen_spectrum(p, f)).dump(); },
      py::arg("params"), py::arg("far"));

  m.def(
      "_solve_stationary",
      [](const ModelParams& p, const FarFieldData& f, std::size_t nodes, double length,
         std::optional<std::string> force_regime) {
        StationaryProfile prof;
        {
          py::gil_scoped_release release;
          prof = solve_stationary(p, f, grid_spec(nodes, length, force_regime));
        }
        py::dict d = profile_dict(prof);
        const RegimeLabel label = classify(p, f);
        const SpectrumReport s =
            prof.solver == label.tag
                ? eigen_spectrum(p, f)
                : eigen_spectrum(make_jacobian(assemble_jacobian(p, f).entries, RegimeLabel{prof.solver, label.mach}));
        d["decay"] = to_json(decay_report(prof, s, f.delta())).dump();
        return d;
      },
      py::arg("params"), py::arg("far"), py::arg("nodes") = 4096, py::arg("length") = 0.0,
      py::arg("force_regime") = py::none());

  m.def(
      "_boundary_slope_sweep",
      [](const ModelParams& p, const FarFieldData& f, const std::vector<double>& deltas, std::size_t nodes,
         double length) {
        py::gil_scoped_release release;
        return to_json(boundary_slope_sweep(p, f, deltas, grid_spec(nodes, length, std::nullopt))).dump();
      },
      py::arg("params"), py::arg("far"), py::arg("deltas"), py::arg("nodes") = 4096, py::arg("length") = 0.0);

  m.def(
      "_evolve",
      [](const ModelParams& p, const FarFieldData& f, const std::vector<std::tuple<std::string, double, double, double>>& bumps,
         double t_end, double report_every, std::size_t nodes, double length, double max_h1) {
        PerturbationSpec spec;
        spec.max_h1 = max_h1;
        for (const auto& [field, amp, center, width] : bumps) spec.bumps.push_back({parse_field(field), amp, center, width});
        RunResult res;
        {
          py::gil_scoped_release release;
          const StationaryProfile prof = solve_stationary(p, f, grid_spec(nodes, length, std::nullopt));
          const InflowData in = inflow_data(f);
          res = run(init_state(prof, spec, in), p, prof, in, t_end, report_every);
        }
        const std::size_t k = res.series.size();
        py::array_t<double> t(k), e(k), diss(k), l2(k), h1(k), sup(k);
        for (std::size_t i = 0; i < k; ++i) {
          const auto& r = res.series[i].report;
          t.mutable_at(i) = res.series[i].t;
          e.mutable_at(i) = r.e_total;
          diss.mutable_at(i) = r.dissipation;
          l2.mutable_at(i) = r.l2_norm;
          h1.mutable_at(i) = r.h1_norm;
          sup.mutable_at(i) = r.sup_norm;
        }
        py::dict d;
        d["t"] = t;
        d["e_total"] = e;
        d["dissipation"] = diss;
        d["l2"] = l2;
        d["h1"] = h1;
        d["sup"] = sup;
        d["x"] = as_array(res.final_state.x);
        d["rho"] = as_array(res.final_state.rho);
        d["u"] = as_array(res.final_state.u);
        d["n"] = as_array(res.final_state.n);
        d["v"] = as_array(res.final_state.v);
        d["steps"] = res.steps;
        d["mass_drift"] = res.mass_drift;
        return d;
      },
      py::arg("params"), py::arg("far"), py::arg("bumps"), py::arg("t_end"), py::arg("report_every"),
      py::arg("nodes") = 4096, py::arg("length") = 0.0, py::arg("max_h1") = 1e-2);

  m.def("relative_entropy", &relative_entropy, py::arg("A"), py::arg("exponent"), py::arg("ref"), py::arg("rho"));
  m.def(
      "weighted_inequality_check",
      [](const std::vector<double>& psi, const std::vector<double>& x, double c0, double delta, int j) {
        const InequalityReport r = weighted_inequality_check(psi, x, c0, delta, j);
        auto side = [](const InequalitySide& s) {
          py::dict d;
          d["lhs"] = s.lhs;
          d["rhs"] = s.rhs;
          d["constant"] = s.constant;
          d["ratio"] = s.ratio;
          d["holds"] = s.holds;
          return d;
        };
        py::dict d;
        d["exponential"] = side(r.exponential);
        d["algebraic"] = side(r.algebraic);
        return d;
      },
      py::arg("psi"), py::arg("x"), py::arg("c0"), py::arg("delta"), py::arg("j") = 3);
}
