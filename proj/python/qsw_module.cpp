#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsw/report.hpp"

namespace py = pybind11;
using namespace qsw;

namespace {

rankopt::OptimizerConfig make_config(int restarts, std::uint64_t seed) {
  rankopt::OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

DensityMatrix as_state(const Matrix& rho, int m, int n) { return DensityMatrix(rho, BipartiteDims(m, n)); }

}  // namespace

PYBIND11_MODULE(_qsw, mod) {
  mod.doc() = "Schmidt-number witnesses and edge states (native core)";

  py::register_exception<ValidationError>(mod, "ValidationError", PyExc_ValueError);
  py::register_exception<CertificationError>(mod, "CertificationError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(mod, "NumericalError", PyExc_ArithmeticError);

  mod.def(
      "partial_transpose",
      [](const Matrix& op, int m, int n, const std::string& side) {
        if (side != "A" && side != "B") throw ValidationError("side must be 'A' or 'B'");
        return partial_transpose(op, BipartiteDims(m, n), side == "A" ? Side::A : Side::B);
      },
      py::arg("op"), py::arg("m"), py::arg("n"), py::arg("side") = "A");
  mod.def(
      "schmidt_coefficients",
      [](const Vector& v, int m, int n) { return schmidt_coefficients(v, BipartiteDims(m, n)); }, py::arg("psi"),
      py::arg("m"), py::arg("n"));
  mod.def(
      "ppt_min_eigenvalue", [](const Matrix& rho, int m, int n) { return is_ppt(as_state(rho, m, n)).min_eigenvalue; },
      py::arg("rho"), py::arg("m"), py::arg("n"));
  mod.def(
      "extremal_overlap",
      [](const Matrix& a, int m, int n, int r, bool maximize, int restarts, std::uint64_t seed) {
        const auto res = rankopt::extremal_overlap(a, BipartiteDims(m, n), r,
                                                   maximize ? rankopt::Extremum::Max : rankopt::Extremum::Min,
                                                   make_config(restarts, seed));
        return py::make_tuple(res.value, res.argvector.amplitudes());
      },
      py::arg("a"), py::arg("m"), py::arg("n"), py::arg("r"), py::arg("maximize") = false, py::arg("restarts") = 64,
      py::arg("seed") = 20010101ULL);
  mod.def("isotropic_witness", &witness::isotropic_matrix, py::arg("m"), py::arg("k"));
  mod.def(
      "evaluate", [](const Matrix& w, const Matrix& rho, int m, int n) {
        return witness::evaluate(w, as_state(rho, m, n)).value;
      },
      py::arg("w"), py::arg("rho"), py::arg("m"), py::arg("n"));
  mod.def("catalog_names", [] {
    std::vector<std::string> names;
    for (const auto& f : catalog::families()) names.push_back(f.name);
    return names;
  });
  mod.def(
      "catalog_entry",
      [](const std::string& name, const std::map<std::string, double>& params) {
        return io::to_json(catalog::make(name, params)).dump();
      },
      py::arg("name"), py::arg("params") = std::map<std::string, double>{});
  mod.def(
      "edge_decompose",
      [](const Matrix& rho, int m, int n, int k, bool preserve_ppt, int restarts, std::uint64_t seed) {
        const auto dec = edge::edge_decompose(as_state(rho, m, n), k, make_config(restarts, seed),
                                              edge::DecomposeOptions{preserve_ppt, 256});
        return io::to_json(dec).dump();
      },
      py::arg("rho"), py::arg("m"), py::arg("n"), py::arg("k") = 2, py::arg("preserve_ppt") = false,
      py::arg("restarts") = 64, py::arg("seed") = 20010101ULL);
  mod.def(
      "rank4_schmidt2",
      [](const Matrix& rho, int restarts, std::uint64_t seed) {
        return io::to_json(edge::rank4_schmidt2(as_state(rho, 3, 3), make_config(restarts, seed))).dump();
      },
      py::arg("rho"), py::arg("restarts") = 64, py::arg("seed") = 20010101ULL);
  mod.def(
      "classify",
      [](const Matrix& rho, int m, int n, int k_max, int restarts, std::uint64_t seed) {
        const auto state = as_state(rho, m, n);
        const auto cfg = make_config(restarts, seed);
        report::ClassifyOptions opts;
        opts.k_max = k_max;
        py::gil_scoped_release release;
        return report::to_json(report::classify(state, cfg, opts), state, cfg).dump();
      },
      py::arg("rho"), py::arg("m"), py::arg("n"), py::arg("k_max") = 0, py::arg("restarts") = 64,
      py::arg("seed") = 20010101ULL);
  mod.def(
      "conjecture_scan",
      [](int restarts, std::uint64_t seed) {
        const auto cfg = make_config(restarts, seed);
        py::gil_scoped_release release;
        return report::to_json(report::conjecture_scan(cfg), cfg).dump();
      },
      py::arg("restarts") = 64, py::arg("seed") = 20010101ULL);
}
