#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tibvp/dataprep.hpp"
#include "tibvp/driver.hpp"
#include "tibvp/errors.hpp"

namespace py = pybind11;
using namespace tibvp;

namespace {

Overrides overrides(std::optional<int> order, std::optional<std::vector<double>> snapshots,
                    std::optional<std::string> oracle, std::optional<double> dt) {
  Overrides ov;
  ov.order = order;
  ov.snapshots = std::move(snapshots);
  ov.oracle_scheme = std::move(oracle);
  ov.dt = dt;
  return ov;
}

nlohmann::json parse_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
}

// (components, points) copy of a field
py::array_t<double> to_array(const SpatialField& f) {
  py::array_t<double> out({static_cast<py::ssize_t>(f.components()), static_cast<py::ssize_t>(f.points())});
  const auto v = f.values();
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Taylor-series solver for evolution boundary value problems (compiled core)";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<BlowUpError>(m, "BlowUpError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("problem_class", [](const Problem& p) { return std::string(class_name(p.cls)); })
      .def_property_readonly("horizon", [](const Problem& p) { return p.horizon; })
      .def_property_readonly("dim", [](const Problem& p) { return p.grid.dim(); })
      .def_property_readonly("shape",
                             [](const Problem& p) {
                               std::vector<int> s;
                               for (int i = 0; i < p.grid.dim(); ++i) s.push_back(p.grid.count(i));
                               return s;
                             })
      .def_property_readonly("components", [](const Problem& p) { return p.components; })
      .def_property_readonly("snapshots", [](const Problem& p) { return p.snapshots; })
      .def("coordinates",
           [](const Problem& p) {
             const int d = p.grid.dim();
             py::array_t<double> out({static_cast<py::ssize_t>(p.grid.size()), static_cast<py::ssize_t>(d)});
             auto r = out.mutable_unchecked<2>();
             for (std::size_t i = 0; i < p.grid.size(); ++i) {
               const Point x = p.grid.point(i);
               for (int a = 0; a < d; ++a) r(i, a) = x[a];
             }
             return out;
           },
           "grid node coordinates, shape (points, dim), first axis fastest")
      .def("mask",
           [](const Problem& p) {
             py::array_t<bool> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(p.grid.size())});
             auto r = out.mutable_unchecked<1>();
             for (std::size_t i = 0; i < p.grid.size(); ++i) r(i) = p.grid.in_mask(i);
             return out;
           });

  py::class_<Solution>(m, "Solution")
      .def("eval", [](const Solution& s, double t) { return to_array(s.eval(t)); }, py::arg("t"),
           "solution at time t, lift included, shape (components, points)")
      .def_property_readonly("order_used", [](const Solution& s) { return s.info.max_order_used; })
      .def_property_readonly("pieces", [](const Solution& s) { return s.series.pieces.size(); })
      .def_property_readonly("converged", [](const Solution& s) { return s.info.converged; });

  m.def("problem_from_text",
        [](const std::string& text, std::optional<int> order, std::optional<std::vector<double>> snapshots,
           std::optional<std::string> oracle, std::optional<double> dt) {
          return build_problem(parse_text(text), overrides(order, std::move(snapshots), std::move(oracle), dt));
        },
        py::arg("text"), py::arg("order") = py::none(), py::arg("snapshots") = py::none(),
        py::arg("oracle") = py::none(), py::arg("dt") = py::none());

  m.def("solve", [](const Problem& p) { return solve(p); }, py::arg("problem"),
        py::call_guard<py::gil_scoped_release>());
  m.def("residual_max", [](const Problem& p, const Solution& s) { return residual_max(p, s.series.pieces.front()); },
        py::arg("problem"), py::arg("solution"));

  m.def("run_text",
        [](const std::string& command, const std::string& text, const std::string& out_dir, bool timing,
           std::optional<int> order, std::optional<std::vector<double>> snapshots, std::optional<std::string> oracle,
           std::optional<double> dt) {
          const Overrides ov = overrides(order, std::move(snapshots), std::move(oracle), dt);
          const nlohmann::json cfg = parse_text(text);
          py::gil_scoped_release nogil;
          return run(command, cfg, ov, RunOptions{out_dir, timing}).dump();
        },
        py::arg("command"), py::arg("text"), py::arg("out_dir"), py::arg("timing") = true,
        py::arg("order") = py::none(), py::arg("snapshots") = py::none(), py::arg("oracle") = py::none(),
        py::arg("dt") = py::none(), "runs a CLI subcommand and returns report.json as text");

  m.def("bump_profile", py::vectorize(bump_profile), py::arg("rho"), py::arg("a"));
  m.def("lift_profile", py::vectorize(lift_profile), py::arg("rho"), py::arg("a"));
}
