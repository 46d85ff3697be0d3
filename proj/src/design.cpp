#include "braggcascade/design.hpp"

#include <cmath>
#include <numbers>

namespace bragg {

void DesignTarget::validate() const {
    if (!(min_rejection_db > 0.0))
        throw std::invalid_argument("design target: min_rejection must be positive");
    if (!(bandwidth_nm > 0.0))
        throw std::invalid_argument("design target: bandwidth must be positive");
    if (!(bandwidth_tolerance >= 0.0))
        throw std::invalid_argument("design target: tolerance must be >= 0");
    if (!(center_nm > 0.0) || !(max_total_length_nm > 0.0))
        throw std::invalid_argument("design target: center and max length must be positive");
}

GratingSpec solve_section(const DesignTarget& target, double n_g,
                          std::pair<double, double> kappa_bounds,
                          const GratingSpec& section_template) {
    target.validate();
    auto [kappa_min, kappa_max] = kappa_bounds;
    if (!(kappa_min >= 0.0) || !(kappa_max >= kappa_min))
        throw std::invalid_argument("solve_section: bad kappa bounds");

    const double lambda0 = target.center_nm;
    const double pi = std::numbers::pi;
    // kappa-only asymptote of the bandwidth; finite length only adds width.
    const double b_target = target.bandwidth_nm * pi * n_g / (lambda0 * lambda0);
    if (!(b_target > kappa_min))
        throw InfeasibleTarget(
            "solve_section: bandwidth below the kappa-only asymptote for all allowed kappa");

    const double l_min = section_template.period_nm;
    const double l_max = target.max_total_length_nm;

    // Largest kappa on the level set within the length budget.
    const double b_at_lmax = std::sqrt(
        std::max(0.0, b_target * b_target - pi * pi / (l_max * l_max)));
    double kappa = std::min(kappa_max, b_at_lmax);
    if (!(kappa > kappa_min) && kappa_min > 0.0)
        kappa = kappa_min;
    if (!(kappa > 0.0))
        throw InfeasibleTarget("solve_section: no usable kappa on the level set");

    // Bisection on L: bandwidth_nm is monotone decreasing in L.
    const auto bw = [&](double length) {
        return bandwidth_nm(lambda0, n_g, kappa, length);
    };
    if (bw(l_max) > target.bandwidth_nm * (1.0 + 1e-12))
        throw InfeasibleTarget("solve_section: bandwidth unreachable within max length");
    if (bw(l_min) < target.bandwidth_nm)
        throw InfeasibleTarget("solve_section: bandwidth wider than a single period allows");
    double lo = l_min, hi = l_max;
    for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (bw(mid) > target.bandwidth_nm)
            lo = mid;
        else
            hi = mid;
    }

    GratingSpec spec = section_template;
    spec.kappa_per_nm = kappa;
    spec.length_nm = 0.5 * (lo + hi);
    spec.validate();
    return spec;
}

CascadeDesign solve_count(const DesignTarget& target, const GratingSpec& section,
                          const NoiseModel& noise, int trials,
                          const DispersionModel& dispersion,
                          const McOptions& options, int max_sections,
                          double link_length_nm) {
    target.validate();
    section.validate();

    const auto grid = default_metric_grid(section, dispersion);
    McOptions opts = options;
    if (opts.offband.empty())
        opts.offband = grid.offband;

    CascadeSpec single;
    single.sections = {section};
    single.composition = Composition::Incoherent;
    const auto per_section =
        monte_carlo(single, noise, trials, grid.wavelengths_nm, dispersion, opts);
    if (!(per_section.median_rejection_db > 0.0))
        throw InfeasibleTarget("solve_count: per-section median rejection is zero");

    int count = static_cast<int>(std::ceil(target.min_rejection_db /
                                           per_section.median_rejection_db)) +
                1;  // margin section
    count = std::max(count, 1);

    for (; count <= max_sections; ++count) {
        CascadeSpec cascade;
        cascade.sections.assign(static_cast<std::size_t>(count), section);
        cascade.link_lengths_nm.assign(static_cast<std::size_t>(count - 1),
                                       link_length_nm);
        cascade.composition = Composition::Incoherent;
        const auto stats = monte_carlo(cascade, noise, trials,
                                       grid.wavelengths_nm, dispersion, opts);
        if (stats.p25_rejection_db >= target.min_rejection_db) {
            CascadeDesign design;
            design.section = section;
            design.section_count = count;
            design.noiseless_rejection_db =
                count * peak_rejection_db(section.kappa_per_nm, section.length_nm);
            design.mc_median_rejection_db = stats.median_rejection_db;
            design.mc_p25_rejection_db = stats.p25_rejection_db;
            design.predicted_bandwidth_nm = stats.median_bandwidth_nm;
            return design;
        }
    }
    throw InfeasibleTarget("solve_count: section cap reached before target");
}

}  // namespace bragg
