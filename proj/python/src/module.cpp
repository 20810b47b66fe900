#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dynlab/cli/runner.hpp"
#include "dynlab/pseudometrics.hpp"
#include "dynlab/sensitivity.hpp"

namespace py = pybind11;
using namespace dynlab;

namespace {

cli::Scales scales(std::optional<std::vector<double>> eps_grid, std::optional<double> r, std::optional<double> delta,
                   std::optional<std::int64_t> horizon, std::optional<double> tol, std::optional<int> depth,
                   unsigned threads, bool two_arrows) {
  cli::Scales s;
  if (eps_grid) {
    std::sort(eps_grid->rbegin(), eps_grid->rend());
    validate_grid(*eps_grid);
    s.eps_grid = eps_grid;
  }
  s.r = r;
  s.delta = delta;
  s.horizon = horizon;
  s.tol = tol;
  s.depth = depth;
  s.threads = threads;
  s.two_arrows = two_arrows;
  return s;
}

// Runs one command and returns the manifest as JSON text.
template <cli::Bundle (*Cmd)(const cli::RunSpec&, const cli::Scales&)>
std::string run(const std::string& spec, std::optional<std::vector<double>> eps_grid, std::optional<double> r,
                std::optional<double> delta, std::optional<std::int64_t> horizon, std::optional<double> tol,
                std::optional<int> depth, unsigned threads, bool two_arrows) {
  const cli::RunSpec parsed = cli::parse_spec(spec);
  const cli::Scales sc = scales(std::move(eps_grid), r, delta, horizon, tol, depth, threads, two_arrows);
  cli::Bundle b;
  {
    py::gil_scoped_release release;
    b = Cmd(parsed, sc);
  }
  b.manifest["violations"] = b.violations;
  return b.manifest.dump();
}

template <cli::Bundle (*Cmd)(const cli::RunSpec&, const cli::Scales&)>
void bind_command(py::module_& m, const char* name, const char* doc) {
  m.def(name, &run<Cmd>, doc, py::arg("spec"), py::arg("eps_grid") = py::none(), py::arg("r") = py::none(),
        py::arg("delta") = py::none(), py::arg("horizon") = py::none(), py::arg("tol") = py::none(),
        py::arg("depth") = py::none(), py::arg("threads") = 1u, py::arg("two_arrows") = false);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dynlab core bindings";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  bind_command<cli::cmd_analyze>(m, "analyze", "NS/AE/LE/HNS verdicts; returns the manifest as JSON text");
  bind_command<cli::cmd_classify>(m, "classify", "subshift classification; returns the manifest as JSON text");
  bind_command<cli::cmd_envelope>(m, "envelope", "enveloping semigroup approximation; returns the manifest as JSON text");
  bind_command<cli::cmd_chain>(m, "chain", "chain recurrence and Birkhoff center; returns the manifest as JSON text");
  m.def("gallery_listing", &cli::gallery_listing);
  m.def("gallery_ids", &cli::gallery_ids);
  m.def("gallery_spec", [](const std::string& id) {
    for (const auto& e : cli::gallery()) {
      if (e.id == id) return e.spec.dump();
    }
    throw InputError("unknown gallery id '" + id + "'");
  });

  m.def("rotation_dh", [](double alpha, double x, double y, std::int64_t n) {
    return d_H(make_rotation(alpha), Point::real(x), Point::real(y), Horizon(n));
  }, py::arg("alpha"), py::arg("x"), py::arg("y"), py::arg("horizon"));
  m.def("complexity", [](const std::string& params, int n_max) {
    return complexity_profile(cli::parse_subshift(cli::json::parse(params)), n_max);
  }, py::arg("params"), py::arg("n_max"));
  m.def("morse_symbol", &morse_symbol);
  m.attr("__version__") = cli::kToolVersion;
}
