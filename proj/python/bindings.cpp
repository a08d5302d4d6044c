#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyflow/cli/commands.hpp"
#include "hyflow/cli/serialize.hpp"
#include "hyflow/cli/spec.hpp"
#include "hyflow/error.hpp"
#include "hyflow/oracle.hpp"
#include "hyflow/problem1.hpp"
#include "hyflow/problem3.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

hyflow::RampProfile ramp(const std::string& ramp_json) {
  return hyflow::cli::ramp_from_json(hyflow::cli::parse_json_text(ramp_json, "ramp"), ".");
}

std::string solve_json(const std::string& spec_json, int samples) {
  const auto spec = hyflow::cli::parse_spec(spec_json);
  const auto sol = hyflow::cli::solve(spec);
  return hyflow::cli::solution_to_json(sol, samples > 0 ? samples : spec.samples).dump();
}

std::string verify_json(const std::string& doc_json, bool is_solution, int levels) {
  const json doc = hyflow::cli::parse_json_text(doc_json, is_solution ? "solution" : "spec");
  const hyflow::MeasureSolution sol = is_solution ? hyflow::cli::solution_from_json(doc)
                                                  : hyflow::cli::solve(hyflow::cli::spec_from_json(doc));
  return hyflow::cli::verify_solution(sol, levels, is_solution).summary.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-form measure solutions of hypersonic-limit ramp flow";

  auto base = py::register_exception<hyflow::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<hyflow::SpecError>(m, "SpecError", base.ptr());
  py::register_exception<hyflow::InadmissibleError>(m, "InadmissibleError", base.ptr());
  py::register_exception<hyflow::EntropyViolation>(m, "EntropyViolation", base.ptr());
  py::register_exception<hyflow::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<hyflow::ConvergenceError>(m, "ConvergenceError", base.ptr());

  m.def("solve_json", &solve_json, py::arg("spec_json"), py::arg("samples") = 0,
        "Solve a problem spec (JSON text); returns the solution document as JSON text.");
  m.def("verify_json", &verify_json, py::arg("doc_json"), py::arg("is_solution"),
        py::arg("levels") = 5, "Weak-form verification summary as JSON text.");
  m.def(
      "newton_busemann_pressure",
      [](const std::string& ramp_json, double x) {
        const hyflow::Geometry g(ramp(ramp_json));
        const auto p = hyflow::newton_busemann_pressure(g, x);
        return py::make_tuple(p.value, p.admissible);
      },
      py::arg("ramp_json"), py::arg("x"));
  m.def(
      "wall_weights",
      [](const std::string& ramp_json, double x, double E0) {
        const hyflow::Geometry g(ramp(ramp_json));
        const auto w = hyflow::wall_weights(g, x, E0);
        const auto s = hyflow::layer_state(g, x, E0);
        py::dict d;
        d["w_m"] = std::vector<double>(w.w_m.begin(), w.w_m.end());
        d["w_n"] = std::vector<double>(w.w_n.begin(), w.w_n.end());
        d["w_p"] = w.w_p;
        d["w_rho"] = w.w_rho;
        d["u"] = s.u;
        d["v"] = s.v;
        d["E"] = s.E;
        return d;
      },
      py::arg("ramp_json"), py::arg("x"), py::arg("E0") = 1.0);
  m.def(
      "classify_regime",
      [](const std::string& ramp_json, double x_star, double u, double v) {
        const hyflow::Geometry g(ramp(ramp_json));
        hyflow::JetSpec jet;
        jet.x_star = x_star;
        jet.u = u;
        jet.v = v;
        return hyflow::to_string(hyflow::classify_regime(g, jet));
      },
      py::arg("ramp_json"), py::arg("x_star"), py::arg("u"), py::arg("v"));
  m.def(
      "accrete_wall",
      [](const std::string& ramp_json, double x_end, double dx) {
        const hyflow::Geometry g(ramp(ramp_json));
        const auto r = hyflow::accrete_wall(g, x_end, dx);
        std::vector<std::array<double, 5>> rows;
        for (const auto& c : r.cells) rows.push_back({c.x, c.M, c.Px, c.Py, c.w_p});
        return rows;
      },
      py::arg("ramp_json"), py::arg("x_end"), py::arg("dx"),
      "Rows (x, M, Px, Py, w_p) of the wall accretion march.");
}
