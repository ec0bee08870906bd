// Thin Python layer: JSON text in and out, plus numpy access to the Iwasawa factors.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dsim/api.hpp"
#include "dsim/config.hpp"
#include "dsim/verify.hpp"

namespace py = pybind11;
using namespace dsim;

namespace {

using Array = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

MatC from_array(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1) || a.shape(0) < 1)
    throw Error(ErrorCode::Schema, "expected a square 2-d array");
  const std::size_t n = a.shape(0);
  MatC m(n);
  auto r = a.unchecked<2>();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m(j, k) = r(j, k);
  return m;
}

Array to_array(const MatC& m) {
  Array a({m.n(), m.n()});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t j = 0; j < m.n(); ++j)
    for (std::size_t k = 0; k < m.n(); ++k) w(j, k) = m(j, k);
  return a;
}

std::string text(const Json& j) { return j.dump(); }
Json parse(const std::string& s) { return s.empty() ? Json() : Json::parse(s); }

}  // namespace

PYBIND11_MODULE(_dsim, m) {
  m.doc() = "native core of doublesim";
  py::register_exception<Error>(m, "DsimError", PyExc_ValueError);

  m.def("simulate",
        [](const std::string& space, const std::string& hamiltonian, const std::string& point, std::size_t n,
           const std::string& variant, double t_max, double dt, std::size_t stride, std::uint64_t seed, bool restore,
           const std::string& form, const std::string& family) {
          SimulateRequest req;
          req.space = space;
          req.hamiltonian = parse(hamiltonian);
          req.point = parse(point);
          req.n = n;
          req.variant = variant;
          req.t_max = t_max;
          req.dt = dt;
          req.stride = stride;
          req.seed = seed;
          req.restore = restore;
          req.form = form;
          req.family = family;
          return text(simulate(req));
        });
  m.def("bracket", [](const std::string& kind, const std::string& f1, const std::string& f2, const std::string& point,
                      std::size_t n, const std::string& variant, std::uint64_t seed) {
    return text(evaluate_bracket(kind, parse(f1), parse(f2), parse(point), n, variant, seed));
  });
  m.def("invariants", [](const std::string& trajectory, const std::vector<std::string>& kinds) {
    return text(invariants_report(parse(trajectory), kinds));
  });
  m.def("random_point", [](const std::string& space, std::size_t n, const std::string& variant, std::uint64_t seed) {
    return text(random_point_json(space, n, variant, seed));
  });
  m.def("verify", [](const std::string& suite, std::uint64_t seed) { return text(to_json(run_suite(suite, seed))); });
  m.def("run_property", [](const std::string& name, std::uint64_t seed, std::size_t samples) {
    return text(to_json(run_property(name, seed, samples)));
  });
  m.def("suite_names", &suite_names);
  m.def("iwasawa", [](const Array& k) {
    const Iwasawa d = iwasawa(from_array(k));
    py::dict out;
    out["gL"] = to_array(d.gL);
    out["bR"] = to_array(d.bR);
    out["bL"] = to_array(d.bL);
    out["gR"] = to_array(d.gR);
    return out;
  });
}
