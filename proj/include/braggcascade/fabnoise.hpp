#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "braggcascade/tmm.hpp"

namespace bragg {

/// Statistics of the fabrication width-error process: a stationary AR(1)
/// sequence along the grating (local defects) plus one Gaussian offset common
/// to every section and link of a chip realization (under/over etch).
struct NoiseModel {
    double sigma_width_nm = 0.0;
    double correlation_length_nm = 10000.0;
    double wafer_bias_sigma_nm = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrialRecord {
    std::uint64_t trial = 0;
    double rejection_db = 0.0;
    double bandwidth_nm = 0.0;
    bool bandwidth_valid = false;
    bool clipped = false;
};

struct EnsembleStats {
    int trials = 0;
    double median_rejection_db = 0.0;
    double p5_rejection_db = 0.0;
    double p25_rejection_db = 0.0;
    double p75_rejection_db = 0.0;
    double p95_rejection_db = 0.0;
    double median_bandwidth_nm = 0.0;
    std::vector<TrialRecord> records;
};

struct McOptions {
    double dneff_dwidth_per_nm = 1.0e-3;  // width-to-index conversion
    double segment_length_nm = 1000.0;
    int threads = 1;
    std::vector<Band> offband;  // off-band reference windows for rejection
    BandwidthCriterion bandwidth_criterion = BandwidthCriterion::ThreeDb;
};

/// Disorder-induced modal-bypass power floor of one grating section: the
/// backward mode is partially re-scattered into the forward mode over an
/// interaction length capped by the grating penetration depth, so the floor
/// saturates with section length. This is the mechanism behind single-section
/// rejection saturation; single-mode links radiate the bypass, which is why
/// incoherent cascades keep accumulating rejection.
double bypass_floor(const NoiseModel& model, const GratingSpec& spec,
                    double dneff_dwidth_per_nm);

/// Width realization for one grating section, converted to per-segment
/// delta-n_eff. Deterministic in (model.seed, trial, draw order).
std::vector<double> sample_realization(const NoiseModel& model,
                                       const GratingSpec& spec,
                                       double dneff_dwidth_per_nm,
                                       double segment_length_nm,
                                       std::uint64_t trial);

/// Full-cascade realization: wafer bias drawn once and shared, then one AR(1)
/// chain per section and one offset per link.
Realization sample_cascade_realization(const NoiseModel& model,
                                       const CascadeSpec& cascade,
                                       double dneff_dwidth_per_nm,
                                       double segment_length_nm,
                                       std::uint64_t trial);

/// Runs `trials` independent realizations of the cascade, extracts rejection
/// and bandwidth per trial, aggregates medians and percentiles. Results are
/// assembled in trial order, so the output is independent of thread count.
EnsembleStats monte_carlo(const CascadeSpec& cascade, const NoiseModel& model,
                          int trials, const std::vector<double>& grid_nm,
                          const DispersionModel& dispersion,
                          const McOptions& options);

enum class SaturationMode { SingleSection, IncoherentFixedSection };

/// Median rejection versus total filter length. Single-section mode grows one
/// grating; incoherent mode cascades ceil(length/section_length) sections.
std::vector<std::pair<double, double>> saturation_curve(
    const std::vector<double>& lengths_nm, const NoiseModel& model, int trials,
    SaturationMode mode, const GratingSpec& base_spec, double section_length_nm,
    const DispersionModel& dispersion, const McOptions& options);

/// Bisects sigma_width until the single-section median rejection at lengths
/// >= plateau_onset sits within +-2 dB of the target. The base model supplies
/// seed, correlation length and wafer bias.
NoiseModel calibrate_sigma(double target_plateau_db, double plateau_onset_nm,
                           const GratingSpec& spec, int trials,
                           const DispersionModel& dispersion,
                           const McOptions& options, const NoiseModel& base);

/// Wavelength grid dense across the notch with sparse off-band blocks, plus
/// the matching off-band reference windows.
struct MetricGrid {
    std::vector<double> wavelengths_nm;
    std::vector<Band> offband;
};
MetricGrid make_metric_grid(double lambda0_nm, double notch_halfwidth_nm,
                            double dense_step_nm, double offband_offset_nm,
                            double offband_width_nm, double offband_step_nm);

/// Convenience grid sized from the section design: dense to 1.6x the
/// analytic null-to-null half width, off-band blocks well clear of it.
MetricGrid default_metric_grid(const GratingSpec& spec,
                               const DispersionModel& dispersion,
                               double dense_points = 400.0);

/// Half of (index sum - lambda d(index sum)/dlambda); the group index that
/// maps detuning widths into wavelength widths for this grating.
double effective_group_index(const GratingSpec& spec,
                             const DispersionModel& dispersion,
                             double wavelength_nm, double h_nm = 0.1);

}  // namespace bragg
