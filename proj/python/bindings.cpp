#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gamowkit/cerf.hpp"
#include "gamowkit/cli.hpp"
#include "gamowkit/error.hpp"
#include "gamowkit/expand.hpp"
#include "gamowkit/gamow.hpp"
#include "gamowkit/model.hpp"
#include "gamowkit/oracle.hpp"
#include "gamowkit/poles.hpp"
#include "gamowkit/steepest.hpp"

namespace py = pybind11;
using namespace gamowkit;

namespace {

std::vector<GamowState> expansion_states(const PotentialModel& model, int n, int threads) {
  std::vector<PoleRecord> poles = bound_states(model);
  const auto res = first_resonances(model, n, threads);
  poles.insert(poles.end(), res.begin(), res.end());
  return paired_states(model, poles, make_radial_grid(model));
}

}  // namespace

PYBIND11_MODULE(_gamowkit, m) {
  m.doc() = "Resonance poles, Gamow states and resonance expansions";

  static py::exception<Error> error_type(m, "GamowkitError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type.ptr(), e.what());
    }
  });

  py::class_<PotentialModel>(m, "PotentialModel")
      .def_static("delta_shell", &PotentialModel::delta_shell, py::arg("strength"), py::arg("radius"))
      .def_static("square_well", &PotentialModel::square_well, py::arg("depth"), py::arg("radius"))
      .def_static("delta_barrier", &PotentialModel::delta_barrier, py::arg("strength"))
      .def_static("square_barrier", &PotentialModel::square_barrier, py::arg("height"), py::arg("width"))
      .def_property_readonly("kind", [](const PotentialModel& p) { return std::string(to_string(p.kind())); })
      .def_property_readonly("range", &PotentialModel::range)
      .def_property_readonly("strength", &PotentialModel::strength)
      .def_property_readonly("radial", &PotentialModel::radial);

  m.def("dispersion", &dispersion, py::arg("model"), py::arg("k"));
  m.def("smatrix", &smatrix, py::arg("model"), py::arg("k"));
  m.def("jost_function", &jost_function, py::arg("model"), py::arg("k"));
  m.def("green_outgoing", &green_outgoing, py::arg("model"), py::arg("r"), py::arg("r_prime"), py::arg("k"));
  m.def("transmission", [](const PotentialModel& model, Complex p) { return transmission_1d(model, p).transmission; },
        py::arg("model"), py::arg("p"));

  m.def("faddeeva", &faddeeva, py::arg("z"));
  m.def("m_function", &m_function, py::arg("k"), py::arg("t"));

  py::class_<PoleRecord>(m, "PoleRecord")
      .def_readonly("k", &PoleRecord::k)
      .def_property_readonly("cls", [](const PoleRecord& p) { return std::string(to_string(p.cls)); })
      .def_readonly("proper", &PoleRecord::proper)
      .def_readonly("residual", &PoleRecord::residual)
      .def("__repr__", [](const PoleRecord& p) {
        return "PoleRecord(k=" + std::to_string(p.k.real()) + (p.k.imag() < 0 ? "" : "+") +
               std::to_string(p.k.imag()) + "j, " + std::string(to_string(p.cls)) + ")";
      });

  m.def("find_poles",
        [](const PotentialModel& model, double re_min, double re_max, double im_min, double im_max, int threads) {
          return find_poles(model, SearchRegion{re_min, re_max, im_min, im_max}, threads);
        },
        py::arg("model"), py::arg("re_min"), py::arg("re_max"), py::arg("im_min"), py::arg("im_max"),
        py::arg("threads") = 1);
  m.def("first_resonances", &first_resonances, py::arg("model"), py::arg("n"), py::arg("threads") = 1);
  m.def("bound_states", &bound_states, py::arg("model"));

  py::class_<GamowState>(m, "GamowState")
      .def_readonly("pole", &GamowState::pole)
      .def_readonly("normalized", &GamowState::normalized)
      .def("at", &GamowState::at, py::arg("r"))
      .def("norm_integral", &GamowState::norm_integral);
  m.def("gamow_state",
        [](const PotentialModel& model, const PoleRecord& pole) {
          return normalize_gamow(solve_gamow(model, pole, make_radial_grid(model)));
        },
        py::arg("model"), py::arg("pole"));
  m.def("residue_ratio", &residue_ratio, py::arg("model"), py::arg("state"), py::arg("r"), py::arg("r_prime"));

  m.def("propagator",
        [](const PotentialModel& model, double r, double r_prime, double t, int n, const std::string& form) {
          const auto states = expansion_states(model, n, 1);
          if (form == "full") return propagator_full(states, r, r_prime, t, n).total;
          if (form == "proper") return propagator_proper_form(states, r, r_prime, t, n).total;
          if (form == "background") return propagator_proper_plus_background(model, states, r, r_prime, t).total;
          throw Error(ErrorKind::InvalidArgument, "form must be full, proper or background");
        },
        py::arg("model"), py::arg("r"), py::arg("r_prime"), py::arg("t"), py::arg("n") = 20,
        py::arg("form") = "full");
  m.def("spectral_quadrature",
        [](const PotentialModel& model, double r, double r_prime, double t) {
          return spectral_quadrature(model, r, r_prime, t, spectral_path());
        },
        py::arg("model"), py::arg("r"), py::arg("r_prime"), py::arg("t"));
  m.def("free_radial_propagator", &free_radial_propagator, py::arg("r"), py::arg("r_prime"), py::arg("t"));

  m.def("transmitted_wave",
        [](const PotentialModel& model, const std::string& packet, double k0, double x0, double sigma, double x,
           double t, int n_max) {
          const WavePacketSpec spec = packet == "gaussian" ? WavePacketSpec::gaussian(k0, x0, sigma)
                                                           : WavePacketSpec::cutoff(k0, x0);
          return transmitted_wave(model, spec, x, t, n_max).psi;
        },
        py::arg("model"), py::arg("packet"), py::arg("k0"), py::arg("x0"), py::arg("sigma"), py::arg("x"),
        py::arg("t"), py::arg("n_max") = 12);
  m.def("transmitted_wave_quadrature",
        [](const PotentialModel& model, const std::string& packet, double k0, double x0, double sigma, double x,
           double t) {
          const WavePacketSpec spec = packet == "gaussian" ? WavePacketSpec::gaussian(k0, x0, sigma)
                                                           : WavePacketSpec::cutoff(k0, x0);
          return transmitted_wave_quadrature(model, spec, x, t);
        },
        py::arg("model"), py::arg("packet"), py::arg("k0"), py::arg("x0"), py::arg("sigma"), py::arg("x"),
        py::arg("t"));

  m.def("canonical_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"));
  m.def("run_config",
        [](const std::string& text, const std::string& out) {
          RunConfig config = parse_config(text);
          if (!out.empty()) config.out = out;
          return run(config);
        },
        py::arg("text"), py::arg("out") = "");
}
