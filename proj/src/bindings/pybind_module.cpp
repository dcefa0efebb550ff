#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rminmax/config.hpp"
#include "rminmax/geometry.hpp"
#include "rminmax/runner.hpp"
#include "rminmax/trace.hpp"

namespace py = pybind11;
using namespace rminmax;

namespace {

std::vector<double> to_std(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

py::dict result_to_dict(const ExperimentResult& res) {
  py::dict d;
  d["problem"] = res.setup.problem_name;
  d["solver"] = res.solver;
  d["x"] = to_std(res.x);
  d["y"] = to_std(res.y);
  d["gap"] = res.certificate.gap;
  d["gap_x"] = res.certificate.gap_x;
  d["gap_y"] = res.certificate.gap_y;
  d["dist_sq"] = res.certificate.dist_sq;
  d["certificate_method"] = res.certificate.method;
  d["iters"] =
      res.trace.rows.empty() ? std::int64_t(0) : res.trace.rows.back().iter;
  d["rows"] = static_cast<std::int64_t>(res.trace.rows.size());
  d["fit_column"] = res.fit_column;
  d["fit_slope"] = res.fit_iter.slope;
  d["csv"] = trace_to_csv(res.trace);
  d["summary"] = res.summary;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Geodesically convex minimization and min-max solvers on Hadamard "
      "manifolds: config-driven experiment runner plus the curvature "
      "distortion constants.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.def("zeta", &zeta, py::arg("R"), py::arg("kmin"),
        "Curvature distortion constant s coth(s), s = R sqrt(|kmin|); 1 for "
        "kmin >= 0.");
  m.def("delta", &delta, py::arg("R"), py::arg("kmax"),
        "Curvature distortion constant s cot(s), s = R sqrt(kmax); 1 for "
        "kmax <= 0. Requires s < pi.");

  m.def(
      "solve",
      [](const std::string& config_text) {
        return result_to_dict(
            run_experiment(Config::parse_string(config_text, "<python>")));
      },
      py::arg("config_text"),
      "Run one experiment described by config text (key = value lines); "
      "returns a dict with the final point, certificate, and trace CSV.");

  m.def(
      "solve_file",
      [](const std::string& path) {
        return result_to_dict(run_experiment(Config::parse_file(path)));
      },
      py::arg("path"), "Run one experiment from a config file.");

  m.def(
      "check",
      [](const std::string& scope, const std::string& config_dir) {
        CheckReport report = validate_suite(scope, config_dir);
        py::dict d;
        d["pass"] = report.all_pass();
        d["report"] = report.to_text();
        return d;
      },
      py::arg("scope") = "all", py::arg("config_dir") = "",
      "Run the property-check suite (scope 'geometry', 'solvers', or 'all'); "
      "returns {'pass': bool, 'report': text}.");
}
