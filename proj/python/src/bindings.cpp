#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kreinphoton/cone_geometry.hpp"
#include "kreinphoton/errors.hpp"
#include "kreinphoton/krein_core.hpp"
#include "kreinphoton/lopuszanski.hpp"
#include "kreinphoton/profiles.hpp"
#include "kreinphoton/schwartz_fourier.hpp"
#include "kreinphoton/verification.hpp"
#include "kreinphoton/wavefunction.hpp"

namespace py = pybind11;
using namespace kreinphoton;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_python(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict inner_dict(const InnerProductReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["estimated_error"] = r.estimated_error;
  d["grid_id"] = r.grid_id;
  return d;
}

GridConfig grid_from(const py::object& o) {
  if (o.is_none()) return GridConfig{};
  return SuiteConfig::from_json({{"grid", from_python(o)}}).grid;
}

SL2C parse_element(const std::string& kind, const Vec3& axis, double amount) {
  if (kind == "boost") return SL2C::boost(axis, amount);
  if (kind == "rotation") return SL2C::rotation(axis, amount);
  throw ConfigError("unknown Lorentz element '" + kind + "' (boost, rotation)");
}

}  // namespace

PYBIND11_MODULE(_kreinphoton, m) {
  m.doc() = "Krein-space single-photon wavefunctions on the forward light cone";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<ApexExcluded>(m, "ApexExcluded", error.ptr());
  py::register_exception<RangeError>(m, "RangeError", error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());

  m.def("version", [] { return to_python(environment_fingerprint()); });

  m.def("b_matrix", [](const Vec3& p) { return b_matrix(ConePoint(p)).entries; }, py::arg("p"));
  m.def("fundamental_symmetry", [](const Vec3& p) { return fundamental_symmetry(ConePoint(p)).entries; },
        py::arg("p"));
  m.def(
      "eigensystem",
      [](const Vec3& p) {
        const EigenSystem es = b_eigensystem(ConePoint(p));
        py::list out;
        for (const auto& pair : es.pairs) out.append(py::make_tuple(pair.eigenvalue, pair.vector));
        return out;
      },
      py::arg("p"), "[(eigenvalue, eigenvector)] for w1+, w1-, w_{r^-2}, w_{r^2}");
  m.def("j_bar", &j_bar);
  m.def("krein_form", &krein_form, py::arg("a"), py::arg("b"));
  m.def(
      "hilbert_form", [](const Vec3& p, const Vec4c& a, const Vec4c& b) { return hilbert_form(ConePoint(p), a, b); },
      py::arg("p"), py::arg("a"), py::arg("b"));
  m.def(
      "cross_check",
      [](const Vec3& p, bool extended) {
        const ConePoint q(p);
        const EigenCrossCheck c = extended ? cross_check_extended(q) : cross_check_double(q);
        py::dict d;
        d["reconstruction"] = c.reconstruction;
        d["eigen_residual"] = c.eigen_residual;
        d["orthonormality"] = c.orthonormality;
        d["involution"] = c.involution;
        d["krein_collapse"] = c.krein_collapse;
        d["transversal_defect"] = c.transversal_defect;
        d["positivity_margin"] = c.positivity_margin;
        return d;
      },
      py::arg("p"), py::arg("extended") = false);

  m.def(
      "evaluate_state",
      [](const std::string& spec, const Vec3& p) { return parse_state(spec)(ConePoint(p)); }, py::arg("spec"),
      py::arg("p"));
  m.def(
      "inner_products",
      [](const std::string& phi, const std::string& psi, const py::object& grid) {
        const QuadratureGrid g(grid_from(grid));
        const auto a = parse_state(phi);
        const auto b = parse_state(psi);
        py::dict d;
        d["krein"] = inner_dict(krein_inner(a, b, g));
        d["hilbert"] = inner_dict(hilbert_inner(a, b, g));
        return d;
      },
      py::arg("phi"), py::arg("psi"), py::arg("grid") = py::none());
  m.def(
      "isometry",
      [](const std::string& phi, const std::string& psi, const std::string& kind, const Vec3& axis, double amount,
         bool conjugate, const py::object& grid) {
        const QuadratureGrid g(grid_from(grid));
        const SL2C alpha = parse_element(kind, axis, amount);
        const RepElement e = conjugate ? RepElement::conjugate_lorentz(alpha) : RepElement::lorentz(alpha);
        const IsometryReport r = verify_isometry(e, parse_state(phi), parse_state(psi), g);
        py::dict d;
        d["krein_before"] = inner_dict(r.krein_before);
        d["krein_after"] = inner_dict(r.krein_after);
        d["hilbert_before"] = inner_dict(r.hilbert_before);
        d["hilbert_after"] = inner_dict(r.hilbert_after);
        d["krein_deviation"] = r.krein_deviation();
        d["estimated_error"] = r.estimated_error;
        return d;
      },
      py::arg("phi"), py::arg("psi"), py::arg("kind") = "boost", py::arg("axis") = Vec3(0, 0, 1),
      py::arg("amount") = 1.0, py::arg("conjugate") = false, py::arg("grid") = py::none());

  m.def("library_test_functions", &library_test_function_names);
  m.def(
      "check_s0",
      [](const std::string& name, int order, double tol) {
        const MembershipReport r = s0_membership(library_test_function(name), order, tol);
        py::dict d;
        d["is_member"] = r.is_member;
        d["max_violation"] = r.max_violation;
        d["order_checked"] = r.order_checked;
        d["tolerance"] = r.tolerance;
        return d;
      },
      py::arg("name"), py::arg("order") = 4, py::arg("tol") = 1e-8);

  m.def("suite_names", &suite_names);
  m.def("suite_check_ids", [](const std::string& s) { return suite_check_ids(s); }, py::arg("suite"));
  m.def(
      "run_suite",
      [](const py::object& config) {
        const SuiteConfig c = config.is_none() ? SuiteConfig{} : SuiteConfig::from_json(from_python(config));
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = run_suite(c);
        }
        return to_python(report_json(r));
      },
      py::arg("config") = py::none(), "Runs the verification suites; returns the JSON report as a dict.");
}
