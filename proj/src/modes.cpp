#include "braggcascade/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bragg {

namespace {

constexpr int kScanPoints = 2000;
constexpr double kBisectTol = 1e-10;

double bisect(double lo, double hi, double flo,
              const auto& f) {
    double fhi = f(hi);
    (void)fhi;
    while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void WaveguideGeometry::validate() const {
    if (!(core_thickness_nm > 0.0) || !(core_width_nm > 0.0))
        throw std::invalid_argument("geometry: core dimensions must be positive");
    if (!(n_core > std::max({n_top, n_bottom, n_side})))
        throw std::invalid_argument("geometry: n_core must exceed all cladding indices");
}

double slab_te_residual(double n_core, double n_clad_a, double n_clad_b,
                        double thickness_nm, double wavelength_nm,
                        int mode_order, double n_eff) {
    const double k0 = 2.0 * std::numbers::pi / wavelength_nm;
    const double kx = k0 * std::sqrt(n_core * n_core - n_eff * n_eff);
    const double ga = k0 * std::sqrt(n_eff * n_eff - n_clad_a * n_clad_a);
    const double gb = k0 * std::sqrt(n_eff * n_eff - n_clad_b * n_clad_b);
    return kx * thickness_nm - std::atan(ga / kx) - std::atan(gb / kx) -
           mode_order * std::numbers::pi;
}

std::optional<ModeSolution> solve_slab_te(double n_core, double n_clad_a,
                                          double n_clad_b, double thickness_nm,
                                          double wavelength_nm, int mode_order) {
    if (!(thickness_nm > 0.0) || !(wavelength_nm > 0.0))
        throw std::invalid_argument("solve_slab_te: thickness and wavelength must be positive");
    const double n_clad_max = std::max(n_clad_a, n_clad_b);
    if (!(n_core > n_clad_max))
        throw std::invalid_argument("solve_slab_te: n_core must exceed the cladding indices");
    if (mode_order < 0)
        throw std::invalid_argument("solve_slab_te: mode_order must be >= 0");

    const auto residual = [&](double n) {
        return slab_te_residual(n_core, n_clad_a, n_clad_b, thickness_nm,
                                wavelength_nm, mode_order, n);
    };

    // The residual is monotone decreasing in n_eff for a fixed order, so a
    // uniform scan of the open interval finds the single sign change.
    const double span = n_core - n_clad_max;
    const double eps = span * 1e-9;
    double prev_n = n_clad_max + eps;
    double prev_f = residual(prev_n);
    for (int i = 1; i <= kScanPoints; ++i) {
        const double n = n_clad_max + eps +
                         (span - 2.0 * eps) * static_cast<double>(i) / kScanPoints;
        const double f = residual(n);
        if ((prev_f < 0.0) != (f < 0.0)) {
            const double root = bisect(prev_n, n, prev_f, residual);
            return ModeSolution{root, mode_order, wavelength_nm};
        }
        prev_n = n;
        prev_f = f;
    }
    return std::nullopt;
}

std::optional<ModeSolution> effective_index_2d(const WaveguideGeometry& geometry,
                                               double wavelength_nm,
                                               int mode_order) {
    geometry.validate();
    if (mode_order < 0 || mode_order > 1)
        throw std::invalid_argument("effective_index_2d: mode_order must be 0 or 1");

    const auto vertical = solve_slab_te(geometry.n_core, geometry.n_top,
                                        geometry.n_bottom, geometry.core_thickness_nm,
                                        wavelength_nm, 0);
    if (!vertical)
        return std::nullopt;

    const auto lateral = solve_slab_te(vertical->n_eff, geometry.n_side,
                                       geometry.n_side, geometry.core_width_nm,
                                       wavelength_nm, mode_order);
    if (!lateral)
        return std::nullopt;

    // A lateral root below the buried oxide (or any cladding) index is not a
    // bound mode of the full structure; it leaks into the substrate. This is
    // what makes the narrow interconnect radiate TE1.
    const double n_clad_max =
        std::max({geometry.n_top, geometry.n_bottom, geometry.n_side});
    if (lateral->n_eff <= n_clad_max)
        return std::nullopt;

    return ModeSolution{lateral->n_eff, mode_order, wavelength_nm};
}

DispersionModel DispersionModel::constant(std::vector<double> n_by_order) {
    if (n_by_order.empty())
        throw std::invalid_argument("DispersionModel::constant: need at least one index");
    DispersionModel m;
    m.kind_ = Kind::Constant;
    m.constant_n_ = std::move(n_by_order);
    return m;
}

DispersionModel DispersionModel::table(std::vector<double> wavelengths_nm,
                                       std::vector<std::vector<double>> n_by_order) {
    if (wavelengths_nm.size() < 2)
        throw std::invalid_argument("DispersionModel::table: need at least two samples");
    if (!std::is_sorted(wavelengths_nm.begin(), wavelengths_nm.end()))
        throw std::invalid_argument("DispersionModel::table: wavelengths must be sorted");
    for (const auto& col : n_by_order)
        if (col.size() != wavelengths_nm.size())
            throw std::invalid_argument("DispersionModel::table: column length mismatch");
    DispersionModel m;
    m.kind_ = Kind::Table;
    m.table_wavelengths_ = std::move(wavelengths_nm);
    m.table_n_ = std::move(n_by_order);
    return m;
}

DispersionModel DispersionModel::from_geometry(const WaveguideGeometry& geometry) {
    geometry.validate();
    DispersionModel m;
    m.kind_ = Kind::Geometry;
    m.geometry_ = geometry;
    return m;
}

double DispersionModel::index(double wavelength_nm, int mode_order) const {
    switch (kind_) {
        case Kind::Constant: {
            if (mode_order < 0 || static_cast<size_t>(mode_order) >= constant_n_.size())
                throw NoGuidedMode("constant dispersion has no entry for this mode order");
            return constant_n_[static_cast<size_t>(mode_order)];
        }
        case Kind::Table: {
            if (mode_order < 0 || static_cast<size_t>(mode_order) >= table_n_.size())
                throw NoGuidedMode("table dispersion has no column for this mode order");
            const auto& xs = table_wavelengths_;
            const auto& ys = table_n_[static_cast<size_t>(mode_order)];
            // Linear interpolation, linear extrapolation at the ends.
            size_t hi = std::upper_bound(xs.begin(), xs.end(), wavelength_nm) - xs.begin();
            hi = std::clamp<size_t>(hi, 1, xs.size() - 1);
            const size_t lo = hi - 1;
            const double t = (wavelength_nm - xs[lo]) / (xs[hi] - xs[lo]);
            return ys[lo] + t * (ys[hi] - ys[lo]);
        }
        case Kind::Geometry: {
            const auto sol = effective_index_2d(geometry_, wavelength_nm, mode_order);
            if (!sol)
                throw NoGuidedMode("geometry-derived dispersion: mode below cutoff");
            return sol->n_eff;
        }
    }
    throw std::logic_error("unreachable");
}

DispersionModel DispersionModel::tabulated(double min_nm, double max_nm,
                                           double step_nm, int max_order) const {
    if (!(max_nm > min_nm) || !(step_nm > 0.0))
        throw std::invalid_argument("DispersionModel::tabulated: bad window");
    std::vector<double> xs;
    for (double l = min_nm; l <= max_nm + 0.5 * step_nm; l += step_nm)
        xs.push_back(l);
    std::vector<std::vector<double>> cols(static_cast<size_t>(max_order) + 1);
    for (int order = 0; order <= max_order; ++order) {
        auto& col = cols[static_cast<size_t>(order)];
        col.reserve(xs.size());
        for (double l : xs)
            col.push_back(index(l, order));
    }
    return table(std::move(xs), std::move(cols));
}

double group_index(const DispersionModel& dispersion, double wavelength_nm,
                   int mode_order, double h_nm) {
    const double np = dispersion.index(wavelength_nm + h_nm, mode_order);
    const double nm = dispersion.index(wavelength_nm - h_nm, mode_order);
    const double n0 = dispersion.index(wavelength_nm, mode_order);
    return n0 - wavelength_nm * (np - nm) / (2.0 * h_nm);
}

std::optional<double> group_index(const WaveguideGeometry& geometry,
                                  double wavelength_nm, int mode_order,
                                  double h_nm) {
    const auto n0 = effective_index_2d(geometry, wavelength_nm, mode_order);
    const auto np = effective_index_2d(geometry, wavelength_nm + h_nm, mode_order);
    const auto nm = effective_index_2d(geometry, wavelength_nm - h_nm, mode_order);
    if (!n0 || !np || !nm)
        return std::nullopt;
    return n0->n_eff - wavelength_nm * (np->n_eff - nm->n_eff) / (2.0 * h_nm);
}

std::optional<double> dneff_dwidth(const WaveguideGeometry& geometry,
                                   double wavelength_nm, int mode_order,
                                   double hw_nm) {
    WaveguideGeometry wide = geometry;
    WaveguideGeometry narrow = geometry;
    wide.core_width_nm += hw_nm;
    narrow.core_width_nm -= hw_nm;
    const auto np = effective_index_2d(wide, wavelength_nm, mode_order);
    const auto nm = effective_index_2d(narrow, wavelength_nm, mode_order);
    if (!np || !nm)
        return std::nullopt;
    return (np->n_eff - nm->n_eff) / (2.0 * hw_nm);
}

}  // namespace bragg
