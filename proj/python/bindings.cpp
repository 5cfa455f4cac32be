#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pdclab/bell.hpp"
#include "pdclab/counting.hpp"
#include "pdclab/double_slit.hpp"
#include "pdclab/errors.hpp"
#include "pdclab/io/run.hpp"
#include "pdclab/loophole.hpp"
#include "pdclab/photon_stats.hpp"
#include "pdclab/polarization.hpp"

namespace py = pybind11;
using namespace pdclab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entangled-pair experiment simulator (angles in radians)";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

  py::class_<EntangledState>(m, "EntangledState")
      .def(py::init(&make_state), py::arg("f_mag"), py::arg("f_phase") = 0.0)
      .def_readonly("f_mag", &EntangledState::f_mag)
      .def_readonly("f_phase", &EntangledState::f_phase);

  py::class_<Transmissions>(m, "Transmissions")
      .def(py::init([](double par, double perp) {
             Transmissions t{par, perp};
             validate(t);
             return t;
           }),
           py::arg("par") = 1.0, py::arg("perp") = 0.0)
      .def_readonly("par", &Transmissions::par)
      .def_readonly("perp", &Transmissions::perp);

  py::class_<AnalyzerSetting>(m, "AnalyzerSetting")
      .def_static("at", &AnalyzerSetting::at, py::arg("theta"),
                  py::arg("eps") = Transmissions::ideal())
      .def_static("open", &AnalyzerSetting::open)
      .def_readonly("theta", &AnalyzerSetting::theta)
      .def_readonly("is_open", &AnalyzerSetting::is_open);

  m.def("coincidence_prob", &coincidence_prob, py::arg("state"), py::arg("a1"), py::arg("a2"),
        py::arg("alignment") = 1.0);
  m.def("single_prob", &single_prob, py::arg("state"), py::arg("a"));
  m.def("visibility", &visibility, py::arg("state"), py::arg("fixed"), py::arg("eps"),
        py::arg("alignment") = 1.0);

  py::class_<CHSettings>(m, "CHSettings")
      .def(py::init([](double a, double b, double c, double d) { return CHSettings{a, b, c, d}; }),
           py::arg("theta1"), py::arg("theta2"), py::arg("theta1p"), py::arg("theta2p"))
      .def_static("from_degrees", &CHSettings::from_degrees)
      .def_readonly("theta1", &CHSettings::theta1)
      .def_readonly("theta2", &CHSettings::theta2)
      .def_readonly("theta1p", &CHSettings::theta1p)
      .def_readonly("theta2p", &CHSettings::theta2p);

  py::class_<CHResult>(m, "CHResult")
      .def_readonly("ch_per_pair", &CHResult::ch_per_pair)
      .def_readonly("ratio_r", &CHResult::ratio_r)
      .def_readonly("coincidence_sum", &CHResult::coincidence_sum)
      .def_readonly("marginal_sum", &CHResult::marginal_sum)
      .def_readonly("settings", &CHResult::settings);

  m.def("ch_sum", &ch_sum, py::arg("state"), py::arg("settings"),
        py::arg("eps") = Transmissions::ideal(), py::arg("alignment") = 1.0);
  m.def(
      "optimize_settings",
      [](const EntangledState &s, const Transmissions &eps, double alignment, double grid_step_deg) {
        OptimizerOptions opt;
        opt.grid_step_deg = grid_step_deg;
        return optimize_settings(s, eps, alignment, opt).best;
      },
      py::arg("state"), py::arg("eps") = Transmissions::ideal(), py::arg("alignment") = 1.0,
      py::arg("grid_step_deg") = 3.0);

  m.def(
      "ch_per_detection",
      [](const EntangledState &s, double eta, const Transmissions &eps) {
        return ch_per_detection(s, eta, eps);
      },
      py::arg("state"), py::arg("eta"), py::arg("eps") = Transmissions::ideal());
  m.def(
      "critical_efficiency",
      [](const EntangledState &s, const Transmissions &eps) { return critical_efficiency(s, eps); },
      py::arg("state"), py::arg("eps") = Transmissions::ideal());

  py::class_<SantosParams>(m, "SantosParams")
      .def(py::init<>())
      .def_readwrite("eta", &SantosParams::eta)
      .def_readwrite("focal_m", &SantosParams::focal_m)
      .def_readwrite("radius_m", &SantosParams::radius_m)
      .def_readwrite("distance_m", &SantosParams::distance_m)
      .def_readwrite("coherence_s", &SantosParams::coherence_s)
      .def_readwrite("wavelength_m", &SantosParams::wavelength_m)
      .def_readwrite("depth_m", &SantosParams::depth_m)
      .def_readwrite("absorb_s", &SantosParams::absorb_s)
      .def_readwrite("singles_rate_hz", &SantosParams::singles_rate_hz);
  m.def("santos_min_rate", &santos_min_rate);
  m.def("santos_T_bound", &santos_T_bound);

  py::class_<VisibilityInequality>(m, "VisibilityInequality")
      .def_readonly("v_a", &VisibilityInequality::v_a)
      .def_readonly("v_b", &VisibilityInequality::v_b)
      .def_readonly("lhs", &VisibilityInequality::lhs)
      .def_readonly("rhs", &VisibilityInequality::rhs)
      .def_readonly("satisfied", &VisibilityInequality::satisfied);
  m.def("visibility_inequality", &visibility_inequality, py::arg("n0"), py::arg("n90"),
        py::arg("n22p5"), py::arg("n67p5"), py::arg("eta"));

  py::class_<SlitGeometry>(m, "SlitGeometry")
      .def(py::init<>())
      .def_readwrite("separation_m", &SlitGeometry::separation_m)
      .def_readwrite("width_m", &SlitGeometry::width_m)
      .def_readwrite("wavelength_m", &SlitGeometry::wavelength_m)
      .def_readwrite("incidence_a", &SlitGeometry::incidence_a)
      .def_readwrite("incidence_b", &SlitGeometry::incidence_b)
      .def_readwrite("det1_distance_m", &SlitGeometry::det1_distance_m)
      .def_readwrite("det2_distance_m", &SlitGeometry::det2_distance_m)
      .def_readwrite("aperture1_m", &SlitGeometry::aperture1_m)
      .def_readwrite("aperture2_m", &SlitGeometry::aperture2_m);
  m.def("diffraction_g", &diffraction_g);
  m.def("coincidence_pattern", &coincidence_pattern, py::arg("geom"), py::arg("x1_m"),
        py::arg("x2_m"));
  m.def(
      "pattern_scan",
      [](const SlitGeometry &g, double x2, const std::vector<double> &x1) {
        std::vector<std::pair<double, double>> out;
        for (const auto &p : pattern_scan(g, x2, x1)) out.emplace_back(p.x, p.y);
        return out;
      },
      py::arg("geom"), py::arg("fixed_x2_m"), py::arg("x1_range_m"));

  py::enum_<SourceKind>(m, "SourceKind")
      .value("heralded_pdc", SourceKind::heralded_pdc)
      .value("coherent", SourceKind::coherent)
      .value("thermal", SourceKind::thermal);

  py::class_<SourceModel>(m, "SourceModel")
      .def(py::init<>())
      .def_static("coherent_laser", &SourceModel::coherent_laser)
      .def_static("thermal_lamp", &SourceModel::thermal_lamp, py::arg("mean_per_gate"),
                  py::arg("modes") = 1000)
      .def_static("heralded", &SourceModel::heralded)
      .def_readwrite("kind", &SourceModel::kind)
      .def_readwrite("mean_per_gate", &SourceModel::mean_per_gate)
      .def_readwrite("modes", &SourceModel::modes)
      .def_readwrite("split_ratio", &SourceModel::split_ratio)
      .def_readwrite("eta1", &SourceModel::eta1)
      .def_readwrite("eta2", &SourceModel::eta2)
      .def_readwrite("dark_per_gate_1", &SourceModel::dark_per_gate_1)
      .def_readwrite("dark_per_gate_2", &SourceModel::dark_per_gate_2)
      .def_readwrite("heralding_fidelity", &SourceModel::heralding_fidelity)
      .def_readwrite("background_per_gate", &SourceModel::background_per_gate)
      .def_readwrite("trigger_rate_hz", &SourceModel::trigger_rate_hz)
      .def_readwrite("trigger_efficiency", &SourceModel::trigger_efficiency)
      .def_readwrite("gate_width_s", &SourceModel::gate_width_s);

  py::class_<CountTally>(m, "CountTally")
      .def_readonly("gates", &CountTally::gates_n)
      .def_readonly("n1", &CountTally::n1)
      .def_readonly("n2", &CountTally::n2)
      .def_readonly("nc", &CountTally::nc)
      .def_readonly("alpha", &CountTally::alpha)
      .def_readonly("alpha_sigma", &CountTally::alpha_sigma)
      .def_readonly("defined", &CountTally::defined);

  m.def("simulate_gates", &simulate_gates, py::arg("source"), py::arg("gates"), py::arg("seed"));
  m.def("expected_alpha", &expected_alpha);
  m.def("exact_alpha", &exact_alpha);

  m.def(
      "accidental_rate",
      [](double r1, double r2, double window) { return accidental_rate({r1, r2, window, 1.0}); },
      py::arg("rate1_hz"), py::arg("rate2_hz"), py::arg("window_s"));
  m.def("chi2_upper_tail", &chi2_upper_tail, py::arg("chi2"), py::arg("dof"));

  m.def(
      "run_cli",
      [](const std::vector<std::string> &args) {
        std::vector<const char *> argv{"pdclab"};
        for (const auto &a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code =
            io::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
