#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bmfix/cli.hpp"
#include "bmfix/error.hpp"
#include "bmfix/orbit.hpp"
#include "bmfix/scenarios.hpp"
#include "bmfix/setops.hpp"

namespace py = pybind11;
using namespace bmfix;

namespace {

// Python ints are ids of a finite space; floats and sequences are coordinates.
Point to_point(py::handle h) {
  if (py::isinstance<py::bool_>(h)) throw InvalidInput("a point cannot be a bool");
  if (py::isinstance<py::int_>(h)) return Point::at(h.cast<std::size_t>());
  if (py::isinstance<py::float_>(h)) return Point::scalar(h.cast<double>());
  return Point(h.cast<Coords>());
}

py::object from_point(const Point& p) {
  if (p.is_id()) return py::int_(p.id());
  return py::cast(p.coords());
}

std::vector<Point> to_points(const py::iterable& xs) {
  std::vector<Point> out;
  for (auto h : xs) out.push_back(to_point(h));
  return out;
}

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_bmfix, m) {
  m.doc() = "Fixed points of set-valued quasi-contractions on b-metric spaces";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<HypothesisViolation>(m, "HypothesisViolation", base.ptr());

  py::class_<BMetricSpace>(m, "BMetricSpace")
      .def_property_readonly("s", &BMetricSpace::s)
      .def_property_readonly("kind",
                             [](const BMetricSpace& sp) { return sp.kind() == DomainKind::Finite ? "finite" : "vector"; })
      .def_property_readonly("dimension", &BMetricSpace::dimension)
      .def_property_readonly("size", &BMetricSpace::size)
      .def("dist", [](const BMetricSpace& sp, py::handle x, py::handle y) { return sp.dist(to_point(x), to_point(y)); })
      .def("to_dict", [](const BMetricSpace& sp) { return to_py(space_to_json(sp)); })
      .def_static("from_dict", [](const py::object& o) { return space_from_json(from_py(o)); });

  m.def("power_space", &make_power_space, py::arg("dim"), py::arg("p"),
        "R^dim with d(x,y) = ||x-y||^p and s = max(1, 2^(p-1)).");
  m.def("matrix_space", &make_matrix_space, py::arg("n"), py::arg("matrix"), py::arg("s"));

  m.def(
      "verify_axioms",
      [](const BMetricSpace& sp, const py::iterable& sample, double tol) {
        return to_py(axiom_report_to_json(verify_axioms(sp, to_points(sample), tol)));
      },
      py::arg("space"), py::arg("sample"), py::arg("tol") = 0.0);
  m.def("estimate_min_s", [](const BMetricSpace& sp, const py::iterable& sample) {
    return estimate_min_s(sp, to_points(sample));
  });

  m.def(
      "hausdorff",
      [](const BMetricSpace& sp, const py::iterable& a, const py::iterable& b) {
        return hausdorff(sp, PointSet(sp, to_points(a)), PointSet(sp, to_points(b)));
      },
      py::arg("space"), py::arg("a"), py::arg("b"));

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("space", [](const Scenario& sc) { return sc.space; })
      .def_property_readonly("x0", [](const Scenario& sc) { return from_point(sc.x0); })
      .def("image", [](const Scenario& sc, py::handle x) {
        py::list out;
        for (const auto& p : sc.map.image(sc.space, to_point(x))) out.append(from_point(p));
        return out;
      })
      .def("to_dict", [](const Scenario& sc) { return to_py(scenario_to_json(sc)); })
      .def_static("from_dict", [](const py::object& o) { return scenario_from_json(from_py(o)); })
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; });

  m.def("paper_example", &paper_example);
  m.def(
      "random_finite",
      [](std::uint64_t seed, std::size_t n, double p, double cap) { return random_finite(seed, n, p, cap).scenario; },
      py::arg("seed"), py::arg("n_points") = 5, py::arg("p") = 2.0, py::arg("alpha_cap") = 0.5);
  m.def(
      "load_scenario", [](const std::string& path) { return load_scenario(path); }, py::arg("path"));
  m.def(
      "resolve_scenario",
      [](const std::string& name, std::optional<std::uint64_t> seed) { return cli::resolve_scenario(name, seed); },
      py::arg("name"), py::arg("seed") = py::none());

  m.def("certify", [](const Scenario& sc) { return to_py(certificate_to_json(certify_scenario(sc))); });

  m.def(
      "run",
      [](const Scenario& sc) {
        const auto r = cli::execute(sc);
        py::dict out;
        out["report"] = to_py(cli::make_report(r));
        out["trace"] = to_py(trace_to_json(r.trace));
        out["exit_code"] = cli::exit_code_for(r);
        return out;
      },
      py::arg("scenario"), "Certify, iterate and audit; returns the report, the trace and the CLI exit code.");

  m.def("gamma_of", &gamma_of, py::arg("beta"), py::arg("q"), py::arg("s"));
  m.def("default_beta", &default_beta, py::arg("alpha"), py::arg("q"), py::arg("s"));
  m.def(
      "chaining_bound", [](const std::vector<double>& steps, double s) { return chaining_bound(steps, s); },
      py::arg("steps"), py::arg("s"));
  m.def(
      "cauchy_series",
      [](double gamma, double s, double d01) {
        const auto c = cauchy_series(gamma, s, d01);
        py::dict out;
        out["S"] = c.S;
        out["terms_used"] = c.terms_used;
        out["bound0"] = cauchy_bound(0, c);
        return out;
      },
      py::arg("gamma"), py::arg("s"), py::arg("d01") = 0.0);
  m.def(
      "cauchy_bound",
      [](std::size_t m_, double gamma, double s, double d01) { return cauchy_bound(m_, cauchy_series(gamma, s, d01)); },
      py::arg("m"), py::arg("gamma"), py::arg("s"), py::arg("d01"));

  py::class_<SplitMix64>(m, "SplitMix64")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next", &SplitMix64::next)
      .def("uniform", &SplitMix64::uniform);
}
