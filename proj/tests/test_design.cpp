#include <doctest.h>

#include <cmath>

#include "braggcascade/design.hpp"

using namespace bragg;

namespace {
const auto kDisp = DispersionModel::constant({2.75, 2.55});
}

TEST_CASE("section solve lands on the bandwidth level set") {
    DesignTarget target;
    target.bandwidth_nm = 6.0;
    target.center_nm = 1537.0;
    const double n_g = 2.65;
    const auto spec = solve_section(target, n_g, {1e-6, 1e-3}, GratingSpec{});
    const double achieved =
        bandwidth_nm(target.center_nm, n_g, spec.kappa_per_nm, spec.length_nm);
    CHECK(achieved == doctest::Approx(target.bandwidth_nm).epsilon(1e-7));
    CHECK(spec.kappa_per_nm <= 1e-3);
    CHECK(spec.length_nm <= target.max_total_length_nm);
}

TEST_CASE("round trip through the closed-form pair") {
    // Build a target from a known (kappa, L), solve, and recover a pair on
    // the same level set with the preferred (largest feasible) kappa.
    const double n_g = 2.65, lambda0 = 1537.0;
    const double kappa_ref = 8e-5, length_ref = 150000.0;
    DesignTarget target;
    target.center_nm = lambda0;
    target.bandwidth_nm = bandwidth_nm(lambda0, n_g, kappa_ref, length_ref);
    target.max_total_length_nm = 4.0e6;
    const auto spec = solve_section(target, n_g, {1e-6, kappa_ref}, GratingSpec{});
    CHECK(spec.kappa_per_nm == doctest::Approx(kappa_ref).epsilon(1e-9));
    CHECK(spec.length_nm == doctest::Approx(length_ref).epsilon(1e-6));
}

TEST_CASE("infeasible bandwidth targets are reported") {
    DesignTarget target;
    target.center_nm = 1537.0;
    // Narrower than the kappa-only asymptote of the largest allowed kappa's
    // level set at any length within budget.
    target.bandwidth_nm = 0.05;
    target.max_total_length_nm = 1.0e6;
    CHECK_THROWS_AS(solve_section(target, 2.65, {5e-5, 1e-3}, GratingSpec{}),
                    InfeasibleTarget);

    // Wider than a single-period grating can produce.
    DesignTarget wide;
    wide.center_nm = 1537.0;
    wide.bandwidth_nm = 1e6;
    CHECK_THROWS_AS(solve_section(wide, 2.65, {1e-6, 1e-3}, GratingSpec{}),
                    InfeasibleTarget);
}

TEST_CASE("section count inverts the rejection budget") {
    // Noiseless: ~9.64 dB per section -> 80 dB needs 9 sections plus margin.
    GratingSpec section;
    section.kappa_per_nm = 1e-5;
    section.length_nm = 180000.0;  // kL = 1.8
    DesignTarget target;
    target.min_rejection_db = 80.0;
    NoiseModel quiet;  // zero noise
    McOptions opt;
    opt.dneff_dwidth_per_nm = 4.7e-4;
    const auto design =
        solve_count(target, section, quiet, 3, kDisp, opt, 32, 20000.0);
    const double per = peak_rejection_db(section.kappa_per_nm, section.length_nm);
    CHECK(design.section_count >= static_cast<int>(std::ceil(80.0 / per)));
    CHECK(design.section_count <= static_cast<int>(std::ceil(80.0 / per)) + 1);
    CHECK(design.mc_p25_rejection_db >= 80.0);
    CHECK(design.noiseless_rejection_db ==
          doctest::Approx(design.section_count * per).epsilon(1e-12));
}

TEST_CASE("unreachable cascade target is infeasible") {
    GratingSpec section;
    section.kappa_per_nm = 1e-6;
    section.length_nm = 50000.0;  // ~0.01 dB per section
    DesignTarget target;
    target.min_rejection_db = 80.0;
    McOptions opt;
    opt.dneff_dwidth_per_nm = 4.7e-4;
    CHECK_THROWS_AS(
        solve_count(target, section, NoiseModel{}, 3, kDisp, opt, 8, 20000.0),
        InfeasibleTarget);
}
