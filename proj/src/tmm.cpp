#include "braggcascade/tmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace bragg {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

struct Hyperbolics {
    cplx cosh;
    cplx sinhc;  // sinh(z)/z
};

Hyperbolics hyperbolics(cplx z) {
    if (std::abs(z) < 1e-3) {
        const cplx z2 = z * z;
        return {1.0 + z2 / 2.0 + z2 * z2 / 24.0, 1.0 + z2 / 6.0 + z2 * z2 / 120.0};
    }
    const cplx e = std::exp(z);
    const cplx inv = 1.0 / e;
    return {0.5 * (e + inv), 0.5 * (e - inv) / z};
}

}  // namespace

void Segment::validate() const {
    if (!(length_nm > 0.0))
        throw std::invalid_argument("segment: length must be positive");
    if (!(kappa_per_nm >= 0.0))
        throw std::invalid_argument("segment: kappa must be non-negative");
}

TransferMatrix compose(const TransferMatrix& later, const TransferMatrix& earlier) {
    TransferMatrix out;
    out.m11 = later.m11 * earlier.m11 + later.m12 * earlier.m21;
    out.m12 = later.m11 * earlier.m12 + later.m12 * earlier.m22;
    out.m21 = later.m21 * earlier.m11 + later.m22 * earlier.m21;
    out.m22 = later.m21 * earlier.m12 + later.m22 * earlier.m22;
    return out;
}

TransferMatrix coupler_matrix(double length_nm, double kappa_per_nm,
                              double delta_per_nm) {
    const cplx gamma = std::sqrt(cplx(kappa_per_nm * kappa_per_nm -
                                      delta_per_nm * delta_per_nm));
    const auto h = hyperbolics(gamma * length_nm);
    const cplx shc_l = h.sinhc * length_nm;  // sinh(gamma L)/gamma
    TransferMatrix m;
    m.m11 = h.cosh - kI * delta_per_nm * shc_l;
    m.m12 = -kI * kappa_per_nm * shc_l;
    m.m21 = kI * kappa_per_nm * shc_l;
    m.m22 = h.cosh + kI * delta_per_nm * shc_l;
    return m;
}

TransferMatrix segment_matrix(const Segment& segment, double wavelength_nm,
                              const GratingSpec& spec,
                              const DispersionModel& dispersion) {
    segment.validate();
    const double delta = detuning(wavelength_nm, spec, dispersion) +
                         std::numbers::pi * segment.delta_neff / wavelength_nm;
    return coupler_matrix(segment.length_nm, segment.kappa_per_nm, delta);
}

std::size_t segment_count(const GratingSpec& spec, double segment_length_nm) {
    const double target = segment_length_nm > 0.0 ? segment_length_nm : spec.period_nm;
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(spec.length_nm / target)));
}

TransferMatrix grating_matrix(const GratingSpec& spec, double wavelength_nm,
                              const std::vector<double>& perturbation,
                              const DispersionModel& dispersion,
                              double segment_length_nm) {
    spec.validate();
    const std::size_t n = segment_count(spec, segment_length_nm);
    if (perturbation.size() != n)
        throw SegmentationMismatch("grating_matrix: perturbation list has " +
                                   std::to_string(perturbation.size()) +
                                   " entries for " + std::to_string(n) + " segments");
    const double ell = spec.length_nm / static_cast<double>(n);
    const double delta0 = detuning(wavelength_nm, spec, dispersion);
    const double pi = std::numbers::pi;

    TransferMatrix m = TransferMatrix::identity();
    for (std::size_t i = 0; i < n; ++i) {
        const double delta = delta0 + pi * perturbation[i] / wavelength_nm;
        m = compose(coupler_matrix(ell, spec.kappa_per_nm, delta), m);
    }
    return m;
}

void CascadeSpec::validate() const {
    if (sections.empty())
        throw std::invalid_argument("cascade: needs at least one section");
    for (const auto& s : sections)
        s.validate();
    if (link_lengths_nm.size() + 1 != sections.size())
        throw std::invalid_argument("cascade: link count must be section count - 1");
    if (link_te1_leakage < 0.0 || link_te1_leakage >= 1.0)
        throw std::invalid_argument("cascade: leakage must be in [0, 1)");
}

PowerResponse coherent_cascade(const CascadeSpec& cascade, double wavelength_nm,
                               const std::vector<std::vector<double>>& perturbations,
                               const std::vector<double>& link_phases,
                               double segment_length_nm,
                               const DispersionModel& dispersion) {
    cascade.validate();
    if (cascade.composition != Composition::Coherent)
        throw CompositionMismatch("coherent_cascade: cascade is not coherent");
    if (!perturbations.empty() && perturbations.size() != cascade.sections.size())
        throw SegmentationMismatch("coherent_cascade: one perturbation list per section required");
    if (!link_phases.empty() && link_phases.size() != cascade.link_lengths_nm.size())
        throw std::invalid_argument("coherent_cascade: one phase per link required");

    TransferMatrix m = TransferMatrix::identity();
    for (std::size_t i = 0; i < cascade.sections.size(); ++i) {
        const auto& spec = cascade.sections[i];
        std::vector<double> zero;
        const std::vector<double>* pert = &zero;
        if (!perturbations.empty()) {
            pert = &perturbations[i];
        } else {
            zero.assign(segment_count(spec, segment_length_nm), 0.0);
        }
        m = compose(grating_matrix(spec, wavelength_nm, *pert, dispersion,
                                   segment_length_nm),
                    m);
        if (i + 1 < cascade.sections.size()) {
            const double phase =
                !link_phases.empty()
                    ? link_phases[i]
                    : 2.0 * std::numbers::pi * cascade.link_index *
                          cascade.link_lengths_nm[i] / wavelength_nm;
            TransferMatrix link;
            link.m11 = std::exp(-kI * phase);
            link.m22 = std::exp(kI * phase);
            m = compose(link, m);
        }
    }
    const double t2 = std::norm(m.transmission());
    const double r2 = std::norm(m.reflection());
    return {t2, r2};
}

double incoherent_cascade(const std::vector<double>& section_transmissions) {
    double total = 1.0;
    for (double t : section_transmissions) {
        if (!(t >= 0.0) || t > 1.0 + 1e-12)
            throw std::invalid_argument("incoherent_cascade: transmissions must be in [0, 1]");
        total *= t;
    }
    return total;
}

Spectrum cascade_spectrum(const CascadeSpec& cascade,
                          const std::vector<double>& grid_nm,
                          const DispersionModel& dispersion,
                          const Realization* realization,
                          double segment_length_nm) {
    cascade.validate();
    if (grid_nm.size() < 2 || !std::is_sorted(grid_nm.begin(), grid_nm.end()))
        throw std::invalid_argument("cascade_spectrum: grid must be sorted ascending");
    if (realization &&
        realization->section_perturbations.size() != cascade.sections.size())
        throw SegmentationMismatch("cascade_spectrum: realization/section count mismatch");
    if (realization && !realization->section_bypass.empty() &&
        realization->section_bypass.size() != cascade.sections.size())
        throw SegmentationMismatch("cascade_spectrum: bypass/section count mismatch");

    const std::size_t n_sections = cascade.sections.size();
    std::vector<std::vector<double>> zeros;
    const std::vector<std::vector<double>>* perts = nullptr;
    if (realization) {
        perts = &realization->section_perturbations;
    } else {
        zeros.resize(n_sections);
        for (std::size_t i = 0; i < n_sections; ++i)
            zeros[i].assign(segment_count(cascade.sections[i], segment_length_nm), 0.0);
        perts = &zeros;
    }

    Spectrum s;
    s.wavelengths_nm = grid_nm;
    s.values_db.resize(grid_nm.size());
    s.composition = cascade.composition == Composition::Coherent ? "coherent"
                                                                 : "incoherent";
    s.realization_id = realization ? realization->id : 0;
    s.cascade_hash = cascade_hash(cascade);

    const double eps = cascade.link_te1_leakage;
    const auto bypass_of = [&](std::size_t i) -> double {
        if (!realization || realization->section_bypass.empty())
            return 0.0;
        return realization->section_bypass[i];
    };
    double coherent_bypass = 0.0;
    if (cascade.composition == Composition::Coherent) {
        for (std::size_t i = 0; i < n_sections; ++i)
            coherent_bypass += bypass_of(i);
        coherent_bypass /= static_cast<double>(n_sections);
    }
    for (std::size_t g = 0; g < grid_nm.size(); ++g) {
        const double lambda = grid_nm[g];
        double db;
        if (cascade.composition == Composition::Coherent) {
            std::vector<double> phases;
            if (realization) {
                phases.reserve(cascade.link_lengths_nm.size());
                for (std::size_t i = 0; i < cascade.link_lengths_nm.size(); ++i) {
                    const double n_link =
                        cascade.link_index +
                        (i < realization->link_delta_neff.size()
                             ? realization->link_delta_neff[i]
                             : 0.0);
                    phases.push_back(2.0 * std::numbers::pi * n_link *
                                     cascade.link_lengths_nm[i] / lambda);
                }
            }
            const auto resp = coherent_cascade(cascade, lambda, *perts, phases,
                                               segment_length_nm, dispersion);
            const double t2 =
                std::min(1.0, resp.transmission + coherent_bypass);
            db = 10.0 * std::log10(std::max(t2, 1e-300));
        } else {
            // dB-domain accumulation; a linear product would underflow for
            // deep cascades.
            db = 0.0;
            double r_acc = 0.0;
            for (std::size_t i = 0; i < n_sections; ++i) {
                const auto m = grating_matrix(cascade.sections[i], lambda,
                                              (*perts)[i], dispersion,
                                              segment_length_nm);
                const double t2 = std::min(
                    std::norm(m.transmission()) + bypass_of(i), 1.0);
                const double r2 = std::min(std::norm(m.reflection()), 1.0);
                if (eps > 0.0 && i > 0) {
                    // Incoherent multiple-reflection sum across the link for
                    // the surviving TE1 fraction.
                    const double denom = 1.0 - eps * r_acc * r2;
                    db -= 10.0 * std::log10(denom);
                    r_acc = r2 + t2 * t2 * eps * r_acc / denom;
                } else {
                    r_acc = r2;
                }
                db += 10.0 * std::log10(std::max(t2, 1e-300));
                if (i + 1 < n_sections)
                    db -= cascade.link_loss_db;
            }
        }
        s.values_db[g] = std::min(db, 0.0);
    }
    return s;
}

std::string cascade_hash(const CascadeSpec& cascade) {
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    const auto mixd = [&](double v) { mix(&v, sizeof v); };
    for (const auto& sec : cascade.sections) {
        mixd(sec.period_nm);
        mixd(sec.duty_cycle);
        mixd(sec.length_nm);
        mixd(sec.kappa_per_nm);
        mixd(static_cast<double>(sec.bragg_order));
        mixd(sec.mode_pair == ModePair::Hybrid ? 1.0 : 0.0);
        mixd(sec.avg_width_nm);
        mixd(sec.corrugation_nm);
    }
    for (double l : cascade.link_lengths_nm)
        mixd(l);
    mixd(cascade.composition == Composition::Coherent ? 1.0 : 0.0);
    mixd(cascade.link_index);
    mixd(cascade.link_loss_db);
    mixd(cascade.link_te1_leakage);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bragg
