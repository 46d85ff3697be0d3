#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "braggcascade/config.hpp"

namespace py = pybind11;
using namespace bragg;

PYBIND11_MODULE(_braggcascade, m) {
    m.doc() = "Multi-stage waveguide Bragg notch filter toolkit";

    py::class_<WaveguideGeometry>(m, "WaveguideGeometry")
        .def(py::init<>())
        .def_readwrite("core_thickness_nm", &WaveguideGeometry::core_thickness_nm)
        .def_readwrite("core_width_nm", &WaveguideGeometry::core_width_nm)
        .def_readwrite("n_core", &WaveguideGeometry::n_core)
        .def_readwrite("n_top", &WaveguideGeometry::n_top)
        .def_readwrite("n_bottom", &WaveguideGeometry::n_bottom)
        .def_readwrite("n_side", &WaveguideGeometry::n_side);

    py::class_<ModeSolution>(m, "ModeSolution")
        .def_readonly("n_eff", &ModeSolution::n_eff)
        .def_readonly("mode_order", &ModeSolution::mode_order)
        .def_readonly("wavelength_nm", &ModeSolution::wavelength_nm);

    m.def("effective_index_2d", &effective_index_2d, py::arg("geometry"),
          py::arg("wavelength_nm"), py::arg("mode_order"));
    m.def("group_index",
          py::overload_cast<const WaveguideGeometry&, double, int, double>(&group_index),
          py::arg("geometry"), py::arg("wavelength_nm"), py::arg("mode_order"),
          py::arg("h_nm") = 0.1);
    m.def("dneff_dwidth", &dneff_dwidth, py::arg("geometry"),
          py::arg("wavelength_nm"), py::arg("mode_order"), py::arg("hw_nm") = 1.0);

    py::enum_<ModePair>(m, "ModePair")
        .value("Fundamental", ModePair::Fundamental)
        .value("Hybrid", ModePair::Hybrid);

    py::class_<DispersionModel>(m, "DispersionModel")
        .def_static("constant", &DispersionModel::constant)
        .def_static("table", &DispersionModel::table)
        .def_static("from_geometry", &DispersionModel::from_geometry)
        .def("index", &DispersionModel::index)
        .def("tabulated", &DispersionModel::tabulated, py::arg("min_nm"),
             py::arg("max_nm"), py::arg("step_nm"), py::arg("max_order") = 1);

    py::class_<GratingSpec>(m, "GratingSpec")
        .def(py::init<>())
        .def_readwrite("period_nm", &GratingSpec::period_nm)
        .def_readwrite("duty_cycle", &GratingSpec::duty_cycle)
        .def_readwrite("length_nm", &GratingSpec::length_nm)
        .def_readwrite("kappa_per_nm", &GratingSpec::kappa_per_nm)
        .def_readwrite("bragg_order", &GratingSpec::bragg_order)
        .def_readwrite("mode_pair", &GratingSpec::mode_pair)
        .def_readwrite("avg_width_nm", &GratingSpec::avg_width_nm)
        .def_readwrite("corrugation_nm", &GratingSpec::corrugation_nm);

    py::class_<BraggSolution>(m, "BraggSolution")
        .def_readonly("lambda0_nm", &BraggSolution::lambda0_nm)
        .def_readonly("n1", &BraggSolution::n1)
        .def_readonly("n2", &BraggSolution::n2);

    m.def("bragg_wavelength", &bragg_wavelength, py::arg("spec"),
          py::arg("dispersion"), py::arg("window_min_nm") = 1200.0,
          py::arg("window_max_nm") = 1700.0);
    m.def("peak_rejection_db", &peak_rejection_db);
    m.def("bandwidth_nm", &bandwidth_nm);
    m.def("kappa_from_bandwidth", &kappa_from_bandwidth);
    m.def("detuning", &detuning);
    m.def("uniform_grating_response",
          [](double kappa, double length, double delta) {
              const auto s = uniform_grating_response(kappa, length, delta);
              return py::make_tuple(s.r, s.t);
          });

    py::enum_<Composition>(m, "Composition")
        .value("Coherent", Composition::Coherent)
        .value("Incoherent", Composition::Incoherent);

    py::class_<CascadeSpec>(m, "CascadeSpec")
        .def(py::init<>())
        .def_readwrite("sections", &CascadeSpec::sections)
        .def_readwrite("link_lengths_nm", &CascadeSpec::link_lengths_nm)
        .def_readwrite("composition", &CascadeSpec::composition)
        .def_readwrite("link_index", &CascadeSpec::link_index)
        .def_readwrite("link_loss_db", &CascadeSpec::link_loss_db)
        .def_readwrite("link_te1_leakage", &CascadeSpec::link_te1_leakage);

    py::enum_<SpectrumDomain>(m, "SpectrumDomain")
        .value("LinearTransmission", SpectrumDomain::LinearTransmission)
        .value("PowerDbm", SpectrumDomain::PowerDbm);

    py::class_<Spectrum>(m, "Spectrum")
        .def(py::init<>())
        .def_readwrite("wavelengths_nm", &Spectrum::wavelengths_nm)
        .def_readwrite("values_db", &Spectrum::values_db)
        .def_readwrite("domain", &Spectrum::domain)
        .def_readwrite("floor_dbm", &Spectrum::floor_dbm)
        .def_readwrite("composition", &Spectrum::composition);

    m.def("cascade_spectrum",
          [](const CascadeSpec& cascade, const std::vector<double>& grid,
             const DispersionModel& dispersion, double segment_length_nm) {
              return cascade_spectrum(cascade, grid, dispersion, nullptr,
                                      segment_length_nm);
          },
          py::arg("cascade"), py::arg("grid_nm"), py::arg("dispersion"),
          py::arg("segment_length_nm") = 0.0);

    py::class_<MeasurementChain>(m, "MeasurementChain")
        .def(py::init<>())
        .def_readwrite("source_power_dbm", &MeasurementChain::source_power_dbm)
        .def_readwrite("coupling_loss_db", &MeasurementChain::coupling_loss_db)
        .def_readwrite("detector_floor_dbm", &MeasurementChain::detector_floor_dbm);
    m.def("apply_measurement_chain", &apply_measurement_chain);

    py::class_<Band>(m, "Band")
        .def(py::init<>())
        .def(py::init([](double lo, double hi) { return Band{lo, hi}; }))
        .def_readwrite("lo_nm", &Band::lo_nm)
        .def_readwrite("hi_nm", &Band::hi_nm);

    py::class_<RejectionResult>(m, "RejectionResult")
        .def_readonly("rejection_db", &RejectionResult::rejection_db)
        .def_readonly("offband_level_db", &RejectionResult::offband_level_db)
        .def_readonly("notch_level_db", &RejectionResult::notch_level_db)
        .def_readonly("clipped", &RejectionResult::clipped);
    m.def("extract_rejection_db",
          py::overload_cast<const Spectrum&, const std::vector<Band>&>(
              &extract_rejection_db));

    py::enum_<BandwidthCriterion>(m, "BandwidthCriterion")
        .value("ThreeDb", BandwidthCriterion::ThreeDb)
        .value("NullToNull", BandwidthCriterion::NullToNull);
    m.def("extract_bandwidth_nm", &extract_bandwidth_nm, py::arg("spectrum"),
          py::arg("criterion"),
          py::arg("offband_level_db") = std::numeric_limits<double>::quiet_NaN());
    m.def("extract_center_nm", &extract_center_nm);
    m.def("write_spectrum_csv", &write_spectrum_csv);
    m.def("read_spectrum_csv", &read_spectrum_csv);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init<>())
        .def_readwrite("sigma_width_nm", &NoiseModel::sigma_width_nm)
        .def_readwrite("correlation_length_nm", &NoiseModel::correlation_length_nm)
        .def_readwrite("wafer_bias_sigma_nm", &NoiseModel::wafer_bias_sigma_nm)
        .def_readwrite("seed", &NoiseModel::seed);

    py::class_<McOptions>(m, "McOptions")
        .def(py::init<>())
        .def_readwrite("dneff_dwidth_per_nm", &McOptions::dneff_dwidth_per_nm)
        .def_readwrite("segment_length_nm", &McOptions::segment_length_nm)
        .def_readwrite("threads", &McOptions::threads)
        .def_readwrite("offband", &McOptions::offband);

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("trial", &TrialRecord::trial)
        .def_readonly("rejection_db", &TrialRecord::rejection_db)
        .def_readonly("bandwidth_nm", &TrialRecord::bandwidth_nm)
        .def_readonly("bandwidth_valid", &TrialRecord::bandwidth_valid)
        .def_readonly("clipped", &TrialRecord::clipped);

    py::class_<EnsembleStats>(m, "EnsembleStats")
        .def_readonly("trials", &EnsembleStats::trials)
        .def_readonly("median_rejection_db", &EnsembleStats::median_rejection_db)
        .def_readonly("p5_rejection_db", &EnsembleStats::p5_rejection_db)
        .def_readonly("p25_rejection_db", &EnsembleStats::p25_rejection_db)
        .def_readonly("p75_rejection_db", &EnsembleStats::p75_rejection_db)
        .def_readonly("p95_rejection_db", &EnsembleStats::p95_rejection_db)
        .def_readonly("median_bandwidth_nm", &EnsembleStats::median_bandwidth_nm)
        .def_readonly("records", &EnsembleStats::records);

    m.def("monte_carlo", &monte_carlo, py::arg("cascade"), py::arg("model"),
          py::arg("trials"), py::arg("grid_nm"), py::arg("dispersion"),
          py::arg("options"));

    py::class_<MetricGrid>(m, "MetricGrid")
        .def_readonly("wavelengths_nm", &MetricGrid::wavelengths_nm)
        .def_readonly("offband", &MetricGrid::offband);
    m.def("default_metric_grid", &default_metric_grid, py::arg("spec"),
          py::arg("dispersion"), py::arg("dense_points") = 400.0);
    m.def("effective_group_index", &effective_group_index, py::arg("spec"),
          py::arg("dispersion"), py::arg("wavelength_nm"), py::arg("h_nm") = 0.1);

    py::class_<DesignTarget>(m, "DesignTarget")
        .def(py::init<>())
        .def_readwrite("min_rejection_db", &DesignTarget::min_rejection_db)
        .def_readwrite("bandwidth_nm", &DesignTarget::bandwidth_nm)
        .def_readwrite("bandwidth_tolerance", &DesignTarget::bandwidth_tolerance)
        .def_readwrite("center_nm", &DesignTarget::center_nm)
        .def_readwrite("max_total_length_nm", &DesignTarget::max_total_length_nm);

    py::class_<CascadeDesign>(m, "CascadeDesign")
        .def_readonly("section", &CascadeDesign::section)
        .def_readonly("section_count", &CascadeDesign::section_count)
        .def_readonly("noiseless_rejection_db", &CascadeDesign::noiseless_rejection_db)
        .def_readonly("mc_median_rejection_db", &CascadeDesign::mc_median_rejection_db)
        .def_readonly("mc_p25_rejection_db", &CascadeDesign::mc_p25_rejection_db)
        .def_readonly("predicted_bandwidth_nm", &CascadeDesign::predicted_bandwidth_nm);

    m.def("solve_section", &solve_section, py::arg("target"), py::arg("n_g"),
          py::arg("kappa_bounds"), py::arg("section_template"));
    m.def("solve_count", &solve_count, py::arg("target"), py::arg("section"),
          py::arg("noise"), py::arg("trials"), py::arg("dispersion"),
          py::arg("options"), py::arg("max_sections") = 32,
          py::arg("link_length_nm") = 20000.0);
}
