#pragma once

#include <complex>

#include "braggcascade/modes.hpp"

namespace bragg {

enum class ModePair { Fundamental, Hybrid };

/// One uniform Bragg grating section.
struct GratingSpec {
    double period_nm = 290.0;
    double duty_cycle = 0.5;
    double length_nm = 250000.0;
    double kappa_per_nm = 1e-4;
    int bragg_order = 1;
    ModePair mode_pair = ModePair::Hybrid;
    double avg_width_nm = 1150.0;
    double corrugation_nm = 50.0;

    double teeth_length_nm() const { return duty_cycle * period_nm; }
    double gap_length_nm() const { return (1.0 - duty_cycle) * period_nm; }
    void validate() const;
};

struct BraggSolution {
    double lambda0_nm = 0.0;
    double n1 = 0.0;  // forward mode index at lambda0
    double n2 = 0.0;  // backward mode index at lambda0 (equals n1 when fundamental)
};

/// Sum of the effective indices entering the phase-matching condition:
/// 2*n_eff(TE0) for fundamental gratings, n_eff(TE0)+n_eff(TE1) for hybrid.
double index_sum(const GratingSpec& spec, const DispersionModel& dispersion,
                 double wavelength_nm);

/// Solves lambda = period * index_sum(lambda) / bragg_order self-consistently
/// by a bracketing scan of the residual over the window plus bisection.
BraggSolution bragg_wavelength(const GratingSpec& spec,
                               const DispersionModel& dispersion,
                               double window_min_nm = 1200.0,
                               double window_max_nm = 1700.0);

/// Peak rejection of a uniform grating, -10*log10(1 - tanh^2(kappa*L)).
double peak_rejection_db(double kappa_per_nm, double length_nm);

/// Null-to-null bandwidth, lambda0^2/(pi*n_g) * sqrt(kappa^2 + pi^2/L^2).
double bandwidth_nm(double lambda0_nm, double n_g, double kappa_per_nm,
                    double length_nm);

/// Inverse of bandwidth_nm at fixed lambda0, n_g and L. Throws
/// BandwidthBelowLengthLimit when the requested bandwidth is below the
/// kappa = 0 floor lambda0^2/(n_g*L).
double kappa_from_bandwidth(double delta_lambda_nm, double lambda0_nm,
                            double n_g, double length_nm);

struct ScatteringAmplitudes {
    std::complex<double> r;
    std::complex<double> t;
};

/// Closed-form reflection/transmission of a uniform grating at detuning
/// delta. Lossless: |r|^2 + |t|^2 = 1. Continuous across |delta| = kappa.
ScatteringAmplitudes uniform_grating_response(double kappa_per_nm,
                                              double length_nm,
                                              double delta_per_nm);
ScatteringAmplitudes uniform_grating_response(const GratingSpec& spec,
                                              double delta_per_nm);

/// Maps wavelength to the CMT detuning variable,
/// delta = pi * index_sum(lambda)/lambda - pi * p / period.
double detuning(double wavelength_nm, const GratingSpec& spec,
                const DispersionModel& dispersion);

/// Perturbative coupling estimate from the effective-index swing between the
/// wide and narrow grating widths. A rough starting point only; calibrate
/// against a bandwidth when accuracy matters.
double kappa_estimate(const WaveguideGeometry& geometry, const GratingSpec& spec,
                      double lambda0_nm);

}  // namespace bragg
