// Python bindings for the core operations: geometry, channel synthesis,
// secrecy metrics, and the end-to-end design loop.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xlris/sweeps.hpp"

namespace py = pybind11;
using namespace xlris;

namespace {

py::dict rates_dict(const Rates& r) {
  py::dict d;
  d["user_bits"] = r.user_bits;
  d["eve_bits"] = r.eve_bits;
  d["secrecy_bits"] = r.secrecy_bits;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "secrecy-rate optimization for an XL reflecting surface";

  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<ArrayConfig>(m, "ArrayConfig")
      .def(py::init<>())
      .def_readwrite("bs_antennas", &ArrayConfig::bs_antennas)
      .def_readwrite("ris_n1", &ArrayConfig::ris_n1)
      .def_readwrite("ris_n2", &ArrayConfig::ris_n2)
      .def_readwrite("element_spacing", &ArrayConfig::element_spacing)
      .def_readwrite("carrier_hz", &ArrayConfig::carrier_hz)
      .def("ris_elements", &ArrayConfig::ris_elements)
      .def("wavelength", &ArrayConfig::wavelength)
      .def("spacing", &ArrayConfig::spacing);

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<>())
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z);

  py::class_<PolarPosition>(m, "PolarPosition")
      .def(py::init<>())
      .def_readwrite("radius", &PolarPosition::radius)
      .def_readwrite("azimuth", &PolarPosition::azimuth);

  py::class_<SceneGeometry>(m, "SceneGeometry")
      .def(py::init<>())
      .def_readwrite("bs_position", &SceneGeometry::bs_position)
      .def_readwrite("ris_center", &SceneGeometry::ris_center)
      .def_readwrite("user", &SceneGeometry::user)
      .def_readwrite("eve", &SceneGeometry::eve);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("array", &ScenarioConfig::array)
      .def_readwrite("scene", &ScenarioConfig::scene)
      .def_readwrite("trials", &ScenarioConfig::trials)
      .def_readwrite("base_seed", &ScenarioConfig::base_seed)
      .def("validate", &ScenarioConfig::validate);

  m.def("rayleigh_distance",
        py::overload_cast<const ArrayConfig&>(&rayleigh_distance),
        py::arg("array"), "Fraunhofer boundary for the panel");
  m.def("aperture", &aperture, py::arg("array"));

  m.def(
      "ula_response",
      [](double azimuth, int elements, double spacing, double wavelength) {
        return ula_response(azimuth, elements, spacing, wavelength);
      },
      py::arg("azimuth"), py::arg("elements"), py::arg("spacing"),
      py::arg("wavelength"));
  m.def(
      "upa_response",
      [](double azimuth, double elevation, int n1, int n2, double spacing,
         double wavelength) {
        return upa_response({azimuth, elevation}, n1, n2, spacing, wavelength);
      },
      py::arg("azimuth"), py::arg("elevation"), py::arg("n1"), py::arg("n2"),
      py::arg("spacing"), py::arg("wavelength"));
  m.def(
      "nearfield_steering",
      [](double x, double y, double z, const ArrayConfig& array) {
        return nearfield_steering({x, y, z}, array, Vec3{});
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("array"));

  m.def(
      "draw_channels",
      [](const ScenarioConfig& cfg, std::uint64_t seed, bool far_field) {
        Rng rng(seed);
        ChannelSet ch = draw_channel_set(
            cfg.array, cfg.scene, cfg.fading,
            far_field ? ReceiverModel::far_field : ReceiverModel::near_field,
            rng);
        return py::make_tuple(ch.bs_ris, ch.user, ch.eve);
      },
      py::arg("config"), py::arg("seed"), py::arg("far_field") = false,
      "One channel realization as (bs_ris, user, eve)");

  m.def(
      "secrecy_rates",
      [](const CMat& bs_ris, const CVec& user, const CVec& eve, const CVec& v,
         const CVec& w, const CVec& w_jam, double noise_user,
         double noise_eve) {
        ChannelSet ch{bs_ris, user, eve};
        NoiseAndLimits lim;
        lim.noise_user = noise_user;
        lim.noise_eve = noise_eve;
        Precoders p{w, w_jam};
        return rates_dict(rates_and_secrecy(cascade(ch, RisVector{v}), p, lim));
      },
      py::arg("bs_ris"), py::arg("user"), py::arg("eve"), py::arg("v"),
      py::arg("w"), py::arg("w_jam"), py::arg("noise_user") = dbm_to_watt(-80),
      py::arg("noise_eve") = dbm_to_watt(-80));

  m.def("load_scenario", &load_scenario, py::arg("path"),
        "Scenario from a TOML-subset file; empty path gives the defaults");
  m.def("apply_full_scale", &apply_full_scale, py::arg("config"));
  m.def("parse_mode", [](const std::string& s) {
    ModeSpec ms = ModeSpec::parse(s);
    return ms.name();
  });

  m.def(
      "solve_design",
      [](const ScenarioConfig& cfg, std::uint64_t seed,
         const std::string& mode) {
        TrialResult tr = run_trial(cfg, seed, ModeSpec::parse(mode));
        py::dict d = rates_dict(tr.rates);
        d["feasible"] = tr.feasible;
        d["iterations"] = tr.iterations;
        d["status"] = std::string(tr.feasible ? to_string(tr.status)
                                              : "infeasible");
        return d;
      },
      py::arg("config"), py::arg("seed"), py::arg("mode") = "continuous",
      "End-to-end design for one channel draw; returns the achieved rates");
}
