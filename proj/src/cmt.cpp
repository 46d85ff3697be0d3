#include "braggcascade/cmt.hpp"

#include <cmath>
#include <numbers>

namespace bragg {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

// sinh(z)/z with the removable singularity handled by series.
cplx sinhc(cplx z) {
    if (std::abs(z) < 1e-3) {
        const cplx z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

}  // namespace

void GratingSpec::validate() const {
    if (!(period_nm > 0.0))
        throw std::invalid_argument("grating: period must be positive");
    if (!(length_nm >= period_nm))
        throw std::invalid_argument("grating: length must be at least one period");
    if (!(kappa_per_nm >= 0.0))
        throw std::invalid_argument("grating: kappa must be non-negative");
    if (!(duty_cycle > 0.0 && duty_cycle < 1.0))
        throw std::invalid_argument("grating: duty cycle must be in (0, 1)");
    if (bragg_order < 1)
        throw std::invalid_argument("grating: Bragg order must be >= 1");
}

double index_sum(const GratingSpec& spec, const DispersionModel& dispersion,
                 double wavelength_nm) {
    if (spec.mode_pair == ModePair::Fundamental)
        return 2.0 * dispersion.index(wavelength_nm, 0);
    return dispersion.index(wavelength_nm, 0) + dispersion.index(wavelength_nm, 1);
}

BraggSolution bragg_wavelength(const GratingSpec& spec,
                               const DispersionModel& dispersion,
                               double window_min_nm, double window_max_nm) {
    spec.validate();
    if (!(window_max_nm > window_min_nm))
        throw std::invalid_argument("bragg_wavelength: empty search window");

    const auto residual = [&](double lambda) {
        return lambda - spec.period_nm * index_sum(spec, dispersion, lambda) /
                            spec.bragg_order;
    };

    constexpr int kScan = 500;
    bool have_prev = false;
    double prev_l = 0.0, prev_f = 0.0;
    for (int i = 0; i <= kScan; ++i) {
        const double l = window_min_nm +
                         (window_max_nm - window_min_nm) * static_cast<double>(i) / kScan;
        double f;
        try {
            f = residual(l);
        } catch (const NoGuidedMode&) {
            have_prev = false;  // mode below cutoff here; resume past the gap
            continue;
        }
        if (have_prev && (prev_f < 0.0) != (f < 0.0)) {
            double lo = prev_l, hi = l, flo = prev_f;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double fmid = residual(mid);
                if ((flo < 0.0) == (fmid < 0.0)) {
                    lo = mid;
                    flo = fmid;
                } else {
                    hi = mid;
                }
            }
            const double lambda0 = 0.5 * (lo + hi);
            BraggSolution sol;
            sol.lambda0_nm = lambda0;
            sol.n1 = dispersion.index(lambda0, 0);
            sol.n2 = spec.mode_pair == ModePair::Fundamental
                         ? sol.n1
                         : dispersion.index(lambda0, 1);
            return sol;
        }
        have_prev = true;
        prev_l = l;
        prev_f = f;
    }
    throw NoResonanceInWindow("bragg_wavelength: no phase-matching root in window");
}

double peak_rejection_db(double kappa_per_nm, double length_nm) {
    if (!(kappa_per_nm >= 0.0) || !(length_nm > 0.0))
        throw std::invalid_argument("peak_rejection_db: kappa >= 0 and length > 0 required");
    const double kl = kappa_per_nm * length_nm;
    // -10*log10(1 - tanh^2) == 20*log10(cosh), which stays finite for large
    // kappa*L where 1 - tanh^2 underflows.
    if (kl > 20.0)
        return 20.0 * (kl / std::numbers::ln10 +
                       std::log10(0.5 * (1.0 + std::exp(-2.0 * kl))));
    return 20.0 * std::log10(std::cosh(kl));
}

double bandwidth_nm(double lambda0_nm, double n_g, double kappa_per_nm,
                    double length_nm) {
    if (!(lambda0_nm > 0.0) || !(n_g > 0.0) || !(length_nm > 0.0) ||
        !(kappa_per_nm >= 0.0))
        throw std::invalid_argument("bandwidth_nm: inputs must be positive");
    const double pi = std::numbers::pi;
    return lambda0_nm * lambda0_nm / (pi * n_g) *
           std::sqrt(kappa_per_nm * kappa_per_nm + pi * pi / (length_nm * length_nm));
}

double kappa_from_bandwidth(double delta_lambda_nm, double lambda0_nm,
                            double n_g, double length_nm) {
    const double pi = std::numbers::pi;
    const double b = delta_lambda_nm * pi * n_g / (lambda0_nm * lambda0_nm);
    const double floor = pi / length_nm;
    if (!(b >= floor)) {
        throw BandwidthBelowLengthLimit(
            "kappa_from_bandwidth: bandwidth below the length-limited floor");
    }
    return std::sqrt(b * b - floor * floor);
}

ScatteringAmplitudes uniform_grating_response(double kappa_per_nm,
                                              double length_nm,
                                              double delta_per_nm) {
    const cplx gamma = std::sqrt(cplx(kappa_per_nm * kappa_per_nm -
                                      delta_per_nm * delta_per_nm));
    const cplx z = gamma * length_nm;
    const cplx shc_l = sinhc(z) * length_nm;  // sinh(gamma L)/gamma
    const cplx denom = std::cosh(z) + kI * delta_per_nm * shc_l;
    ScatteringAmplitudes out;
    out.t = 1.0 / denom;
    out.r = -kI * kappa_per_nm * shc_l / denom;
    return out;
}

ScatteringAmplitudes uniform_grating_response(const GratingSpec& spec,
                                              double delta_per_nm) {
    spec.validate();
    return uniform_grating_response(spec.kappa_per_nm, spec.length_nm, delta_per_nm);
}

double detuning(double wavelength_nm, const GratingSpec& spec,
                const DispersionModel& dispersion) {
    const double pi = std::numbers::pi;
    return pi * index_sum(spec, dispersion, wavelength_nm) / wavelength_nm -
           pi * spec.bragg_order / spec.period_nm;
}

double kappa_estimate(const WaveguideGeometry& geometry, const GratingSpec& spec,
                      double lambda0_nm) {
    spec.validate();
    WaveguideGeometry wide = geometry;
    WaveguideGeometry narrow = geometry;
    wide.core_width_nm = spec.avg_width_nm + 0.5 * spec.corrugation_nm;
    narrow.core_width_nm = spec.avg_width_nm - 0.5 * spec.corrugation_nm;

    const auto half_sum = [&](const WaveguideGeometry& g) {
        const auto m0 = effective_index_2d(g, lambda0_nm, 0);
        if (!m0)
            throw NoGuidedMode("kappa_estimate: TE0 below cutoff");
        if (spec.mode_pair == ModePair::Fundamental)
            return m0->n_eff;
        const auto m1 = effective_index_2d(g, lambda0_nm, 1);
        if (!m1)
            throw NoGuidedMode("kappa_estimate: TE1 below cutoff");
        return 0.5 * (m0->n_eff + m1->n_eff);
    };

    const double swing = half_sum(wide) - half_sum(narrow);
    return 2.0 / lambda0_nm * std::abs(swing) *
           std::sin(std::numbers::pi * spec.duty_cycle);
}

}  // namespace bragg
