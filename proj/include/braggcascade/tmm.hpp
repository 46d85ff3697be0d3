#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "braggcascade/cmt.hpp"
#include "braggcascade/spectra.hpp"

namespace bragg {

/// One piecewise-uniform slice of a grating.
struct Segment {
    double length_nm = 0.0;
    double kappa_per_nm = 0.0;
    double delta_neff = 0.0;  // additive shift on the index sum

    void validate() const;
};

/// 2x2 transfer matrix mapping (forward, backward) amplitudes at the entry of
/// an element to the exit. Unit determinant for lossless elements.
struct TransferMatrix {
    std::complex<double> m11{1.0, 0.0}, m12{0.0, 0.0};
    std::complex<double> m21{0.0, 0.0}, m22{1.0, 0.0};

    static TransferMatrix identity() { return {}; }
    std::complex<double> det() const { return m11 * m22 - m12 * m21; }
    std::complex<double> reflection() const { return -m21 / m22; }
    // det is 1 analytically for the lossless elements built here; evaluating
    // it numerically at large |entries| cancels catastrophically, so use 1/m22.
    std::complex<double> transmission() const { return 1.0 / m22; }
};

/// after_then(a, b): matrix of element b followed by element a.
TransferMatrix compose(const TransferMatrix& later, const TransferMatrix& earlier);

/// Closed-form matrix of a uniform coupled-mode slice at effective detuning
/// delta. Reduces to a pure phase when kappa = 0.
TransferMatrix coupler_matrix(double length_nm, double kappa_per_nm,
                              double delta_per_nm);

TransferMatrix segment_matrix(const Segment& segment, double wavelength_nm,
                              const GratingSpec& spec,
                              const DispersionModel& dispersion);

/// Number of segments the grating splits into at the given granularity.
/// segment_length_nm <= 0 selects the default of one segment per period.
std::size_t segment_count(const GratingSpec& spec, double segment_length_nm = 0.0);

/// Transfer matrix of a whole grating as the ordered product of perturbed
/// segment matrices. The perturbation list length must equal segment_count.
TransferMatrix grating_matrix(const GratingSpec& spec, double wavelength_nm,
                              const std::vector<double>& perturbation,
                              const DispersionModel& dispersion,
                              double segment_length_nm = 0.0);

enum class Composition { Coherent, Incoherent };

struct CascadeSpec {
    std::vector<GratingSpec> sections;
    std::vector<double> link_lengths_nm;  // one fewer than sections
    Composition composition = Composition::Incoherent;
    double link_index = 2.4;        // effective index of the interconnect mode
    double link_loss_db = 0.0;      // per link, applied in the incoherent path
    double link_te1_leakage = 0.0;  // reflected-power fraction surviving a link

    void validate() const;
};

/// Per-trial noise state: one delta-n_eff list per section, one index offset
/// per link (enters the coherent link phase), and one modal-bypass power
/// floor per section. The bypass models disorder re-scattering the guided
/// backward mode into the forward mode: over one section the interaction
/// length is capped by the grating penetration depth, so the floor is
/// length-independent for long sections — the origin of rejection
/// saturation. A single-mode link radiates this residual, so in the
/// incoherent composition each section contributes its own floor, while the
/// coherent composition keeps the bypass guided end to end and is floored
/// once.
struct Realization {
    std::vector<std::vector<double>> section_perturbations;
    std::vector<double> link_delta_neff;
    std::vector<double> section_bypass;  // power fraction, empty = none
    std::uint64_t id = 0;
};

struct PowerResponse {
    double transmission = 1.0;
    double reflection = 0.0;
};

/// Full coherent matrix product, including link propagation phases
/// 2*pi*(link_index + link_delta_neff)*length/lambda.
PowerResponse coherent_cascade(const CascadeSpec& cascade, double wavelength_nm,
                               const std::vector<std::vector<double>>& perturbations,
                               const std::vector<double>& link_phases,
                               double segment_length_nm,
                               const DispersionModel& dispersion);

/// Power composition of independent stages: T_total = prod T_i, so rejections
/// add exactly in dB.
double incoherent_cascade(const std::vector<double>& section_transmissions);

/// Spectrum of the cascade on the given sorted grid, dispatching to the
/// coherent or incoherent composition law. Deterministic for a fixed
/// realization; pass nullptr for the unperturbed structure.
Spectrum cascade_spectrum(const CascadeSpec& cascade,
                          const std::vector<double>& grid_nm,
                          const DispersionModel& dispersion,
                          const Realization* realization = nullptr,
                          double segment_length_nm = 0.0);

/// FNV-1a over the numeric cascade description; identifies a configuration in
/// spectrum metadata.
std::string cascade_hash(const CascadeSpec& cascade);

}  // namespace bragg
