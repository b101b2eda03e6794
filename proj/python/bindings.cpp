#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lrcare/bench.hpp"
#include "lrcare/generators.hpp"
#include "lrcare/manifest.hpp"
#include "lrcare/oracle.hpp"
#include "lrcare/run.hpp"

namespace py = pybind11;
using namespace lrcare;

namespace {

using ProblemPtr = std::shared_ptr<CareProblem>;

ProblemPtr from_arrays(const SparseXc& a, const MatrixXc& b, const MatrixXc& c,
                       const std::optional<SparseXc>& e) {
  MatrixXc bb = b;
  if (bb.size() == 0) bb.resize(a.rows(), 0);
  return std::make_shared<CareProblem>(CareProblem::assemble(a, bb, c, e));
}

template <typename Scalar>
py::dict solve_impl(ProblemPtr problem, RunOptions options, ShiftStrategy strategy) {
  LinearBackend backend(problem);
  RunResult<Scalar> result;
  {
    py::gil_scoped_release release;
    result = run<Scalar>(backend, strategy, options);
  }
  py::list history, shifts;
  for (const auto& r : result.records) history.append(r.rel_residual);
  for (Shift mu : result.state.shifts()) shifts.append(mu);
  py::dict out;
  out["converged"] = result.converged;
  out["algorithm"] = to_string(options.algorithm);
  out["shifts"] = shifts;
  out["history"] = history;
  out["rel_residual"] = residual_norm(result.state) / problem->initial_residual_norm();
  out["R"] = result.state.r();
  out["K"] = result.state.k();
  if (!result.state.gain_only()) out["factor"] = cholesky_form(result.state).factor;
  return out;
}

py::dict solve(ProblemPtr problem, const std::string& algorithm,
               const std::optional<std::vector<Shift>>& shifts, double tol, Index max_steps,
               Index batch, Index window, bool gain_only) {
  RunOptions options;
  options.algorithm = algorithm == "auto" ? default_algorithm(*problem) : parse_algorithm(algorithm);
  options.tol = tol;
  options.max_steps = max_steps;
  options.batch = batch;
  options.gain_only = gain_only;
  ShiftStrategy strategy =
      shifts ? ShiftStrategy::fixed(*shifts) : ShiftStrategy::residual_projection(window);
  if (problem->field_is_real()) return solve_impl<double>(problem, options, std::move(strategy));
  return solve_impl<cplx>(problem, options, std::move(strategy));
}

}  // namespace

PYBIND11_MODULE(_lrcare, m) {
  m.doc() = "Low-rank solvers for large algebraic Riccati and Lyapunov equations";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<ShiftRejected>(m, "ShiftRejected", error.ptr());
  py::register_exception<Breakdown>(m, "Breakdown", error.ptr());

  py::class_<CareProblem, ProblemPtr>(m, "Problem")
      .def_property_readonly("n", &CareProblem::n)
      .def_property_readonly("m", &CareProblem::m)
      .def_property_readonly("p", &CareProblem::p)
      .def_property_readonly("is_real", &CareProblem::field_is_real)
      .def_property_readonly("has_mass", &CareProblem::has_mass)
      .def_property_readonly("A", [](const CareProblem& p) { return p.a<cplx>(); })
      .def_property_readonly("B", [](const CareProblem& p) { return p.b<cplx>(); })
      .def_property_readonly("C", [](const CareProblem& p) { return p.c<cplx>(); })
      .def("__repr__", [](const CareProblem& p) {
        return "<Problem n=" + std::to_string(p.n()) + " m=" + std::to_string(p.m()) +
               " p=" + std::to_string(p.p()) + (p.field_is_real() ? " real" : " complex") +
               (p.has_mass() ? " with E" : "") + ">";
      });

  m.def("problem", &from_arrays, py::arg("A"), py::arg("B"), py::arg("C"),
        py::arg("E") = std::nullopt,
        "Assemble a problem from a scipy.sparse A (and E) and dense B, C.");
  m.def(
      "load_manifest",
      [](const std::filesystem::path& path) {
        return std::make_shared<CareProblem>(load_problem(Manifest::read(path)));
      },
      py::arg("path"));
  m.def(
      "convection_diffusion",
      [](Index grid, Index m, Index p, std::uint64_t seed) {
        return std::make_shared<CareProblem>(convection_diffusion_problem(grid, m, p, seed));
      },
      py::arg("grid"), py::arg("m"), py::arg("p"), py::arg("seed") = 1);
  m.def(
      "random_stable",
      [](Index n, Index m, Index p, std::uint64_t seed, bool complex_data) {
        return std::make_shared<CareProblem>(
            random_stable_problem(n, m, p, seed, complex_data));
      },
      py::arg("n"), py::arg("m"), py::arg("p"), py::arg("seed") = 1,
      py::arg("complex_data") = false);
  m.def(
      "with_mass",
      [](ProblemPtr base, std::uint64_t seed) {
        return std::make_shared<CareProblem>(with_random_spd_mass(*base, seed));
      },
      py::arg("problem"), py::arg("seed") = 1);

  m.def("solve", &solve, py::arg("problem"), py::arg("algorithm") = "auto",
        py::arg("shifts") = std::nullopt, py::arg("tol") = 1e-10, py::arg("max_steps") = 100,
        py::arg("batch") = 1, py::arg("window") = 1, py::arg("gain_only") = false,
        "Run the low-rank iteration. Returns a dict with converged, shifts, history, "
        "rel_residual, R, K and factor (X = factor factor^H).");

  m.def(
      "dense_care", [](ProblemPtr p) { return dense_care_solve(*p); }, py::arg("problem"));
  m.def(
      "dense_residual", [](ProblemPtr p, const MatrixXc& x) { return dense_residual(*p, x); },
      py::arg("problem"), py::arg("X"));
  m.def(
      "projected_solution",
      [](ProblemPtr p, const std::vector<Shift>& shifts) {
        return solve_via_projected_lyapunov(*p, shifts).x;
      },
      py::arg("problem"), py::arg("shifts"));
  m.def(
      "bench",
      [](ProblemPtr p, const std::vector<Shift>& shifts, Index reps) {
        const BenchResult r = bench_compare(*p, shifts, reps);
        py::dict out;
        out["basic_solve_s"] = r.basic.solve_seconds;
        out["basic_misc_s"] = r.basic.misc_seconds;
        out["radi_solve_s"] = r.radi.solve_seconds;
        out["radi_misc_s"] = r.radi.misc_seconds;
        out["max_relative_difference"] = r.max_relative_difference;
        out["rows"] = r.rows.size();
        return out;
      },
      py::arg("problem"), py::arg("shifts"), py::arg("reps") = 1);
}
