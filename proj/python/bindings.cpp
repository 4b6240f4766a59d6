#include "kssim/checks.hpp"
#include "kssim/dynamics.hpp"
#include "kssim/modes.hpp"
#include "kssim/profiles.hpp"
#include "kssim/special.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kssim;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

ModelParams make_params(double mu, double eps, double k, double s) {
  ModelParams p;
  p.drift = mu;
  p.time_scale = eps;
  p.weight_power = k;
  p.sobolev_index = s;
  p.validate();
  return p;
}

py::dict profile(double mu, double eps, int n) {
  const ModelParams p = make_params(mu, eps, 4.0, 0.5);
  const RadialProfile prof = solve_profile(p, profile_grid_for(p, default_box_half_width(mu), n));
  py::dict d;
  d["r"] = as_array(prof.grid.r);
  d["P"] = as_array(prof.potential);
  d["dP"] = as_array(prof.dpotential);
  d["lapP"] = as_array(prof.lap_potential);
  d["Q"] = as_array(prof.density);
  d["dQ"] = as_array(prof.ddensity);
  d["residual"] = prof.residual;
  d["iterations"] = prof.iterations;
  d["mass"] = profile_mass(prof);
  d["quartic_coefficient"] = quartic_coefficient(prof);
  return d;
}

py::dict mode_spectrum(int mode, double mu, double eps, int cells, bool deflate) {
  const ModelParams p = make_params(mu, eps, 4.0, 0.5);
  const RadialProfile prof = solve_profile(p, profile_grid_for(p, default_box_half_width(mu)));
  ModeOptions opt;
  opt.cells = cells;
  opt.deflate = deflate;
  const SpectrumReport rep = spectrum(assemble_mode_operator(mode, prof, opt));
  py::dict d;
  d["eigenvalues"] = rep.eigenvalues;
  d["gap"] = rep.gap;
  return d;
}

py::dict criterion(int id) {
  CriterionResult r;
  {
    py::gil_scoped_release release;
    r = run_criterion(id);
  }
  py::list ms;
  for (const auto& m : r.measurements) {
    ms.append(py::dict(py::arg("name") = m.name, py::arg("value") = m.value, py::arg("relation") = m.relation,
                       py::arg("limit") = m.limit, py::arg("pass") = m.pass));
  }
  py::dict d;
  d["id"] = r.id;
  d["title"] = r.title;
  d["pass"] = r.pass;
  d["seconds"] = r.seconds;
  d["measurements"] = ms;
  d["notes"] = r.notes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Self-similar chemotaxis stability lab";
  m.attr("__version__") = KSSIM_VERSION;
  m.def("dirichlet_beta", &dirichlet_beta, py::arg("s"));
  m.def("square_lattice_zeta", &square_lattice_zeta, py::arg("s"));
  m.def("profile", &profile, py::arg("mu") = 1.0, py::arg("eps") = 0.02, py::arg("n") = 4000,
        "Radial profile arrays and diagnostics.");
  m.def("mode_spectrum", &mode_spectrum, py::arg("mode"), py::arg("mu") = 1.0, py::arg("eps") = 0.02,
        py::arg("cells") = 400, py::arg("deflate") = false, "Eigenvalues of one angular block.");
  m.def("criterion_count", [] { return criterion_count; });
  m.def("criterion_title", &criterion_title, py::arg("id"));
  m.def("run_criterion", &criterion, py::arg("id"));
}
