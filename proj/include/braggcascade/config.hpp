#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "braggcascade/design.hpp"

namespace bragg {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridConfig {
    double min_nm = 0.0;
    double max_nm = 0.0;
    double step_nm = 0.0;
};

struct CalibrationRequest {
    double target_db = 40.0;
    double onset_nm = 300000.0;
};

/// One validated run description. Unknown fields are rejected with their
/// path; defaults mirror the 220 nm SOI platform the tool models.
struct RunConfig {
    WaveguideGeometry geometry;

    std::string dispersion_kind = "geometry";  // geometry | constant | table
    std::vector<double> constant_indices = {2.75, 2.55};
    std::vector<double> table_wavelengths_nm;
    std::vector<std::vector<double>> table_indices;
    double tabulate_step_nm = 1.0;  // sampling of geometry-derived dispersion

    GratingSpec grating;
    int section_count = 1;
    double link_length_nm = 20000.0;
    Composition composition = Composition::Incoherent;
    double link_index = 2.4;
    double link_loss_db = 0.0;
    double link_te1_leakage = 0.0;

    NoiseModel noise;
    std::optional<CalibrationRequest> calibrate;

    MeasurementChain measurement;
    bool measurement_enabled = false;

    std::optional<GridConfig> grid;
    double window_min_nm = 1200.0;
    double window_max_nm = 1700.0;
    double segment_length_nm = 1000.0;
    int trials = 200;
    int threads = 1;
    std::string output_dir = ".";

    DesignTarget design;
    double design_kappa_min_per_nm = 1e-6;
    double design_kappa_max_per_nm = 1e-3;
    int design_max_sections = 32;

    static RunConfig from_json(const nlohmann::json& doc);
    static RunConfig from_file(const std::string& path);

    /// All defaults resolved; re-parsing this document reproduces the run.
    nlohmann::json to_effective_json() const;

    /// Dispersion model per the config. Geometry-derived models are sampled
    /// into a table over the search window so inner loops stay cheap.
    DispersionModel build_dispersion() const;

    CascadeSpec build_cascade() const;

    void validate() const;
};

}  // namespace bragg
