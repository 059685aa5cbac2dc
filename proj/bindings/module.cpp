// Python bindings for the core operations: lattice construction, disorder,
// Hamiltonian evaluation, the Nishimori map, exact enumeration and the
// parallel-tempering sampler.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gaugemc/analysis.hpp"
#include "gaugemc/driver.hpp"
#include "gaugemc/nishimori.hpp"
#include "gaugemc/oracle.hpp"

namespace py = pybind11;
using namespace gaugemc;

namespace {

GaugeModel build_model(const std::string& family, int L, int M) {
  return family_from_name(family) == Family::Toric ? build_toric(L, M)
                                                   : build_color(L, M);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monte Carlo threshold estimation for the mapped lattice gauge "
            "theories of toric and color codes";

  py::class_<GaugeModel>(m, "GaugeModel")
      .def_property_readonly(
          "family", [](const GaugeModel& g) { return family_name(g.family); })
      .def_readonly("L", &GaugeModel::L)
      .def_readonly("M", &GaugeModel::M)
      .def_readonly("num_spins", &GaugeModel::num_spins)
      .def_readonly("num_qubit_terms", &GaugeModel::num_qubit_terms)
      .def_readonly("num_measurement_terms", &GaugeModel::num_meas_terms)
      .def_property_readonly("num_terms", &GaugeModel::num_terms)
      .def("term_spins",
           [](const GaugeModel& g, int term) { return g.terms.at(term).spins; })
      .def("term_kind",
           [](const GaugeModel& g, int term) {
             return g.terms.at(term).kind == TermKind::Qubit ? "qubit"
                                                             : "measurement";
           })
      .def_property_readonly(
          "gauge_generators",
          [](const GaugeModel& g) { return g.gauge_generators; })
      .def("export_graph_json",
           [](const GaugeModel& g, int indent) {
             return export_graph_json(g, indent);
           },
           py::arg("indent") = -1)
      .def("__repr__", [](const GaugeModel& g) {
        std::ostringstream ss;
        ss << "GaugeModel(" << family_name(g.family) << ", L=" << g.L
           << ", M=" << g.M << ", spins=" << g.num_spins << ")";
        return ss.str();
      });

  m.def("build_model", &build_model, py::arg("family"), py::arg("L"),
        py::arg("M"), "Build the mapped interaction graph of a code family");

  py::class_<DisorderSample>(m, "DisorderSample")
      .def_readonly("p", &DisorderSample::p)
      .def_readonly("q", &DisorderSample::q)
      .def_readonly("master_seed", &DisorderSample::master_seed)
      .def_readonly("sample_index", &DisorderSample::sample_index)
      .def_readonly("tau", &DisorderSample::tau)
      .def_property_readonly("empirical_rates", [](const DisorderSample& s) {
        return empirical_rates(s);
      });

  m.def("generate_disorder",
        [](const GaugeModel& model, double p, double q,
           std::uint64_t master_seed, std::uint64_t sample_index) {
          return generate_disorder(model, p, q, master_seed, sample_index);
        },
        py::arg("model"), py::arg("p"), py::arg("q"), py::arg("master_seed"),
        py::arg("sample_index") = 0);

  py::class_<NishimoriPoint>(m, "NishimoriPoint")
      .def_readonly("p", &NishimoriPoint::p)
      .def_readonly("q", &NishimoriPoint::q)
      .def_readonly("J", &NishimoriPoint::J)
      .def_readonly("K", &NishimoriPoint::K)
      .def_readonly("T_N", &NishimoriPoint::T_N);

  m.def("nishimori_point", &nishimori_point, py::arg("p"), py::arg("q"));
  m.def("sheet_path", &sheet_path, py::arg("alpha"), py::arg("p_grid"));

  m.def("energy",
        [](const GaugeModel& model, const DisorderSample& sample, double J,
           double K, const std::vector<std::int8_t>& spins) {
          return energy(model, sample, Couplings{J, K},
                        SpinConfiguration{spins});
        },
        py::arg("model"), py::arg("sample"), py::arg("J"), py::arg("K"),
        py::arg("spins"));

  m.def("delta_energy",
        [](const GaugeModel& model, const DisorderSample& sample, double J,
           double K, const std::vector<std::int8_t>& spins, int spin) {
          return delta_energy(model, sample, Couplings{J, K},
                              SpinConfiguration{spins}, spin);
        });

  m.def("wilson_loop",
        [](const GaugeModel& model, const DisorderSample& sample,
           const std::vector<std::int8_t>& spins, int ell, int x0, int y0,
           int t0) {
          return wilson_loop(model, sample, SpinConfiguration{spins},
                             make_wilson_patch(model, ell, x0, y0, t0));
        },
        py::arg("model"), py::arg("sample"), py::arg("spins"), py::arg("ell"),
        py::arg("x0") = 0, py::arg("y0") = 0, py::arg("t0") = 0);

  m.def("apply_gauge",
        [](std::vector<std::int8_t> spins,
           const std::vector<std::int32_t>& generator) {
          SpinConfiguration c{std::move(spins)};
          apply_gauge(c, generator);
          return c.spins;
        });

  py::class_<ExactResult>(m, "ExactResult")
      .def_readonly("temperatures", &ExactResult::temperatures)
      .def_readonly("mean_energy", &ExactResult::mean_energy)
      .def_readonly("mean_energy_sq", &ExactResult::mean_energy2)
      .def_readonly("specific_heat", &ExactResult::specific_heat)
      .def_readonly("mean_wilson", &ExactResult::mean_wilson)
      .def_readonly("log_z", &ExactResult::log_z);

  m.def("enumerate_exact",
        [](const GaugeModel& model, const DisorderSample& sample, double J,
           double K, const std::vector<double>& temperatures, int ell) {
          return enumerate_exact(model, sample, Couplings{J, K}, temperatures,
                                 make_wilson_patch(model, ell, 0, 0, 0));
        },
        py::arg("model"), py::arg("sample"), py::arg("J"), py::arg("K"),
        py::arg("temperatures"), py::arg("ell") = 1);

  py::class_<TemperatureMeasurement>(m, "TemperatureMeasurement")
      .def_readonly("T", &TemperatureMeasurement::T)
      .def_readonly("n_sweeps", &TemperatureMeasurement::n_sweeps)
      .def_readonly("mean_energy", &TemperatureMeasurement::mean_energy)
      .def_readonly("mean_energy_sq", &TemperatureMeasurement::mean_energy_sq)
      .def_readonly("mean_wilson", &TemperatureMeasurement::mean_wilson)
      .def_readonly("block_energy", &TemperatureMeasurement::block_energy)
      .def_readonly("wilson_samples", &TemperatureMeasurement::wilson_samples);

  py::class_<MeasurementSet>(m, "MeasurementSet")
      .def_readonly("equilibrated", &MeasurementSet::equilibrated)
      .def_readonly("eq_bin", &MeasurementSet::eq_bin)
      .def_readonly("total_sweeps", &MeasurementSet::total_sweeps)
      .def_readonly("per_t", &MeasurementSet::per_t)
      .def_readonly("swap_acceptance", &MeasurementSet::swap_acceptance)
      .def("to_json", &MeasurementSet::to_json, py::arg("indent") = -1);

  m.def("run_sample",
        [](const GaugeModel& model, const DisorderSample& sample, double J,
           double K, double t_min, double t_max, int n_t, int b) {
          SweepSchedule schedule;
          schedule.max_bin = b;
          return run_sample(model, sample, Couplings{J, K},
                            linear_ladder(t_min, t_max, n_t), schedule);
        },
        py::arg("model"), py::arg("sample"), py::arg("J"), py::arg("K"),
        py::arg("t_min"), py::arg("t_max"), py::arg("n_t"), py::arg("b") = 14,
        "Equilibrate and measure one disorder sample with parallel tempering");

  m.def("skewness", [](const std::vector<double>& values) -> py::object {
    const auto s = skewness(values);
    return s ? py::cast(*s) : py::none();
  });

  m.def("check_equilibration", [](const std::vector<double>& series) {
    const EquilibrationStatus st = check_equilibration(series);
    py::list bins;
    for (const auto& b : st.bins)
      bins.append(py::make_tuple(b.count, b.mean, b.sem));
    return py::make_tuple(st.converged, bins);
  });

  m.def("gauge_orbit_rank", [](const GaugeModel& model) {
    const GaugeOrbitReport r = gauge_orbit_check(model);
    return py::make_tuple(r.all_preserve, r.num_generators, r.rank);
  });

  m.attr("__version__") = "0.1.0";
}
