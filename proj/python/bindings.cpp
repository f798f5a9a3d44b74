#include "pcpu/baselines.hpp"
#include "pcpu/eco.hpp"
#include "pcpu/errors.hpp"
#include "pcpu/local_solver.hpp"
#include "pcpu/metrics.hpp"
#include "pcpu/pu.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

namespace py = pybind11;
using namespace pcpu;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<Point> to_points(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw DomainError("points must have shape (n, 2)");
  std::vector<Point> out(static_cast<std::size_t>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1)};
  return out;
}

std::vector<double> to_values(const Array& a) {
  if (a.ndim() != 1) throw DomainError("values must be one-dimensional");
  return {a.data(), a.data() + a.shape(0)};
}

py::array_t<double> from_points(const std::vector<Point>& pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    w(static_cast<py::ssize_t>(i), 0) = pts[i].x;
    w(static_cast<py::ssize_t>(i), 1) = pts[i].y;
  }
  return out;
}

py::array_t<double> from_values(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

KernelSpec make_kernel(const std::string& family, std::optional<double> eps) {
  const KernelFamily k = kernel_family_from_string(family);
  KernelSpec spec{k, eps.value_or(k == KernelFamily::WendlandC2 ? 0.1 : 1.0)};
  spec.validate();
  return spec;
}

}  // namespace

PYBIND11_MODULE(_pcpu, m) {
  m.doc() = "Positive-constrained RBF partition-of-unity interpolation";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IngestError>(m, "IngestError", PyExc_ValueError);
  py::register_exception<PatchInfeasible>(m, "PatchInfeasible", PyExc_RuntimeError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<CoverageError>(m, "CoverageError", PyExc_ValueError);

  py::class_<PUModel>(m, "Model")
      .def("__call__", [](const PUModel& model, const Array& pts) { return from_values(evaluate(model, to_points(pts))); },
           py::arg("points"))
      .def_property_readonly("n_patches", [](const PUModel& model) { return model.grid.size(); })
      .def_property_readonly("delta", [](const PUModel& model) { return model.grid.delta; })
      .def_property_readonly("n_added", &PUModel::n_added)
      .def_readonly("warnings", &PUModel::warnings);

  m.def(
      "fit",
      [](const Array& pts, const Array& vals, const std::string& kernel, std::optional<double> eps, bool constrained,
         std::optional<std::size_t> d_override, std::optional<Array> eval_points) {
        PUConfig cfg;
        cfg.kernel = make_kernel(kernel, eps);
        cfg.mode = constrained ? FitMode::PCPU : FitMode::PlainPU;
        cfg.d_override = d_override;
        const auto p = to_points(pts);
        const auto v = to_values(vals);
        const auto e = eval_points ? to_points(*eval_points) : std::vector<Point>{};
        py::gil_scoped_release release;
        return fit(p, v, cfg, e);
      },
      py::arg("points"), py::arg("values"), py::arg("kernel") = "imq", py::arg("eps") = py::none(),
      py::arg("constrained") = true, py::arg("d_override") = py::none(), py::arg("eval_points") = py::none(),
      "Fit a partition-of-unity interpolant; constrained=True keeps it nonnegative.");

  m.def(
      "global_fit",
      [](const Array& pts, const Array& vals, const std::string& kernel, std::optional<double> eps,
         std::optional<Array> eval_points) {
        const auto p = to_points(pts);
        const auto v = to_values(vals);
        const auto e = eval_points ? to_points(*eval_points) : std::vector<Point>{};
        const auto k = make_kernel(kernel, eps);
        py::gil_scoped_release release;
        return global_constrained_fit(p, v, k, {}, e);
      },
      py::arg("points"), py::arg("values"), py::arg("kernel") = "wendland", py::arg("eps") = py::none(),
      py::arg("eval_points") = py::none());

  m.def(
      "shepard",
      [](const Array& pts, const Array& vals, const Array& queries, double power) {
        return from_values(shepard_eval(to_points(pts), to_values(vals), to_points(queries), power));
      },
      py::arg("points"), py::arg("values"), py::arg("queries"), py::arg("power") = 2.0);

  m.def(
      "positive_qp",
      [](const Eigen::MatrixXd& B, const Eigen::VectorXd& f, std::size_t n_base) {
        const QPResult r = solve_positive_qp(B, f, n_base);
        return py::make_tuple(to_string(r.status), r.coeffs, r.objective);
      },
      py::arg("B"), py::arg("f"), py::arg("n_base"),
      "Returns (status, coefficients, objective) of the nonnegative minimum-norm solve.");

  m.def("random_nodes", [](std::size_t n, std::uint64_t seed) { return from_points(random_nodes(n, seed)); },
        py::arg("n"), py::arg("seed"));
  m.def("eval_grid", [](std::size_t side) { return from_points(eval_grid(side)); }, py::arg("side"));
  m.def(
      "test_function",
      [](const std::string& name, const Array& pts) {
        const auto id = test_function_from_string(name);
        std::vector<double> out;
        for (const auto& p : to_points(pts)) out.push_back(test_function(id, p.x, p.y));
        return from_values(out);
      },
      py::arg("name"), py::arg("points"));
  m.def(
      "error_report",
      [](const Array& truth, const Array& approx) {
        const auto r = error_report(to_values(truth), to_values(approx));
        py::dict d;
        d["mae"] = r.mae;
        d["rmse"] = r.rmse;
        d["n_eval"] = r.n_eval;
        d["min_value"] = r.min_value;
        d["n_negative"] = r.n_negative;
        return d;
      },
      py::arg("truth"), py::arg("approx"));

  m.def(
      "eco_surface",
      [](double a, double b, std::pair<double, double> alpha, std::pair<double, double> mu, std::size_t n_side,
         double t_end, double dt) {
        const auto s = eco::equilibrium_surface(eco::EcoParams::dolomiti(a, b), {alpha.first, alpha.second},
                                                {mu.first, mu.second}, n_side, t_end, dt);
        return py::make_tuple(from_points(s.points), from_values(s.values), s.warnings);
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = std::pair{10.0, 30.0}, py::arg("mu") = std::pair{0.01, 0.05},
      py::arg("n_side") = 20, py::arg("t_end") = 20000.0, py::arg("dt") = 1.0,
      "Herbivore equilibrium H(t_end) over an (alpha, mu) grid mapped to the unit square.");
}
