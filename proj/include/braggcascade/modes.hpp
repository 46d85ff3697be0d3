#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "braggcascade/errors.hpp"

namespace bragg {

/// Strip waveguide cross section. All lengths in nanometres, indices
/// dimensionless at the operating wavelength.
struct WaveguideGeometry {
    double core_thickness_nm = 220.0;
    double core_width_nm = 1150.0;
    double n_core = 3.476;   // Si
    double n_top = 1.0;      // air top cladding
    double n_bottom = 1.444; // buried oxide
    double n_side = 1.0;     // fully etched, air on the sides

    void validate() const;
};

struct ModeSolution {
    double n_eff = 0.0;
    int mode_order = 0;
    double wavelength_nm = 0.0;
};

/// TE dispersion residual of an asymmetric slab, zero at a guided mode.
/// Defined for n_eff in (max(n_clad_a, n_clad_b), n_core).
double slab_te_residual(double n_core, double n_clad_a, double n_clad_b,
                        double thickness_nm, double wavelength_nm,
                        int mode_order, double n_eff);

/// Solves the asymmetric slab TE dispersion relation for the mode_order-th
/// guided mode. Brackets by a uniform scan of the open index interval and
/// refines by bisection to |dn_eff| < 1e-10. Empty result means the mode is
/// below cutoff.
std::optional<ModeSolution> solve_slab_te(double n_core, double n_clad_a,
                                          double n_clad_b, double thickness_nm,
                                          double wavelength_nm, int mode_order);

/// Effective-index method: vertical slab solve through the core thickness,
/// then a horizontal solve across the width using the vertical result as the
/// core index. A lateral root below the strongest cladding index of the full
/// structure counts as unguided (substrate leakage).
std::optional<ModeSolution> effective_index_2d(const WaveguideGeometry& geometry,
                                               double wavelength_nm,
                                               int mode_order);

/// Wavelength-to-index rule consumed by the grating physics. Either a fixed
/// index per mode order, a table with linear interpolation, or a live
/// effective-index solve of a geometry.
class DispersionModel {
public:
    enum class Kind { Constant, Table, Geometry };

    static DispersionModel constant(std::vector<double> n_by_order);
    static DispersionModel table(std::vector<double> wavelengths_nm,
                                 std::vector<std::vector<double>> n_by_order);
    static DispersionModel from_geometry(const WaveguideGeometry& geometry);

    /// n_eff at (wavelength, mode order). Throws NoGuidedMode when the
    /// geometry-derived model is evaluated below cutoff.
    double index(double wavelength_nm, int mode_order) const;

    /// Samples this model on a uniform grid and returns a table model.
    /// Used to pull the slab solves out of per-wavelength inner loops.
    DispersionModel tabulated(double min_nm, double max_nm, double step_nm,
                              int max_order = 1) const;

    Kind kind() const { return kind_; }

private:
    DispersionModel() = default;
    Kind kind_ = Kind::Constant;
    std::vector<double> constant_n_;
    std::vector<double> table_wavelengths_;
    std::vector<std::vector<double>> table_n_;
    WaveguideGeometry geometry_;
};

/// n_g = n_eff - lambda * dn_eff/dlambda, central difference with step h.
double group_index(const DispersionModel& dispersion, double wavelength_nm,
                   int mode_order, double h_nm = 0.1);
std::optional<double> group_index(const WaveguideGeometry& geometry,
                                  double wavelength_nm, int mode_order,
                                  double h_nm = 0.1);

/// dn_eff/dW, central difference with step hw. Converts width noise into
/// effective-index noise.
std::optional<double> dneff_dwidth(const WaveguideGeometry& geometry,
                                   double wavelength_nm, int mode_order,
                                   double hw_nm = 1.0);

}  // namespace bragg
