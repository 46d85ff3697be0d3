#pragma once

#include "braggcascade/fabnoise.hpp"

namespace bragg {

struct DesignTarget {
    double min_rejection_db = 80.0;
    double bandwidth_nm = 10.0;
    double bandwidth_tolerance = 0.1;  // relative
    double center_nm = 1550.0;
    double max_total_length_nm = 4.0e6;

    void validate() const;
};

struct CascadeDesign {
    GratingSpec section;
    int section_count = 1;
    double noiseless_rejection_db = 0.0;
    double mc_median_rejection_db = 0.0;
    double mc_p25_rejection_db = 0.0;
    double predicted_bandwidth_nm = 0.0;
};

/// Picks (kappa, L) on the bandwidth level set for the target, preferring the
/// largest kappa within bounds (most rejection per unit length), with L found
/// by bisection. The template supplies period, duty cycle and mode pair.
GratingSpec solve_section(const DesignTarget& target, double n_g,
                          std::pair<double, double> kappa_bounds,
                          const GratingSpec& section_template);

/// Chooses the section count from the Monte Carlo per-section median plus one
/// margin section, then verifies the full cascade at the 25th percentile,
/// growing the count up to the cap until the target holds.
CascadeDesign solve_count(const DesignTarget& target, const GratingSpec& section,
                          const NoiseModel& noise, int trials,
                          const DispersionModel& dispersion,
                          const McOptions& options, int max_sections = 32,
                          double link_length_nm = 20000.0);

}  // namespace bragg
