#include <doctest.h>

#include <cmath>

#include "braggcascade/modes.hpp"

using namespace bragg;

namespace {

// Independent root bracketing at fixed resolution, used as an oracle against
// the production bisection solver.
double scan_root(double n_core, double na, double nb, double t, double lambda,
                 int order) {
    const double lo = std::max(na, nb) + 1e-9;
    const double hi = n_core - 1e-9;
    const double step = 1e-6;
    double prev_x = hi;
    double prev_f = slab_te_residual(n_core, na, nb, t, lambda, order, prev_x);
    for (double x = hi - step; x > lo; x -= step) {
        const double f = slab_te_residual(n_core, na, nb, t, lambda, order, x);
        if (prev_f == 0.0)
            return prev_x;
        if (f * prev_f < 0.0)
            return 0.5 * (x + prev_x);
        prev_x = x;
        prev_f = f;
    }
    return -1.0;
}

}  // namespace

TEST_CASE("slab TE0 root matches a fixed-resolution scan oracle") {
    const double oracle = scan_root(3.476, 1.0, 1.444, 220.0, 1550.0, 0);
    REQUIRE(oracle > 0.0);
    const auto sol = solve_slab_te(3.476, 1.0, 1.444, 220.0, 1550.0, 0);
    REQUIRE(sol.has_value());
    CHECK(std::abs(sol->n_eff - oracle) < 2e-6);
    CHECK(std::abs(slab_te_residual(3.476, 1.0, 1.444, 220.0, 1550.0, 0,
                                    sol->n_eff)) < 1e-8);
}

TEST_CASE("mode ordering and cutoff") {
    const auto te0 = solve_slab_te(3.476, 1.444, 1.444, 400.0, 1550.0, 0);
    const auto te1 = solve_slab_te(3.476, 1.444, 1.444, 400.0, 1550.0, 1);
    REQUIRE(te0.has_value());
    REQUIRE(te1.has_value());
    CHECK(te0->n_eff > te1->n_eff);
    // A very thin slab keeps only the fundamental.
    CHECK_FALSE(solve_slab_te(3.476, 1.444, 1.444, 150.0, 1550.0, 1).has_value());
}

TEST_CASE("n_eff monotone in thickness and core index") {
    double prev = 0.0;
    for (double t = 200.0; t <= 400.0; t += 50.0) {
        const auto s = solve_slab_te(3.476, 1.0, 1.444, t, 1550.0, 0);
        REQUIRE(s.has_value());
        CHECK(s->n_eff > prev);
        prev = s->n_eff;
    }
    prev = 0.0;
    for (double nc = 3.0; nc <= 3.5; nc += 0.1) {
        const auto s = solve_slab_te(nc, 1.0, 1.444, 220.0, 1550.0, 0);
        REQUIRE(s.has_value());
        CHECK(s->n_eff > prev);
        prev = s->n_eff;
    }
}

TEST_CASE("thick slab approaches the core index") {
    const auto s = solve_slab_te(3.476, 1.0, 1.444, 20000.0, 1550.0, 0);
    REQUIRE(s.has_value());
    CHECK(s->n_eff > 3.47);
    CHECK(s->n_eff < 3.476);
}

TEST_CASE("effective index method: guidance vs substrate leakage") {
    WaveguideGeometry g;  // 1150 nm wide strip
    const auto te0 = effective_index_2d(g, 1550.0, 0);
    const auto te1 = effective_index_2d(g, 1550.0, 1);
    REQUIRE(te0.has_value());
    REQUIRE(te1.has_value());
    CHECK(te0->n_eff > te1->n_eff);
    CHECK(te1->n_eff > g.n_bottom);  // guided above the oxide line

    WaveguideGeometry narrow = g;
    narrow.core_width_nm = 400.0;
    CHECK(effective_index_2d(narrow, 1550.0, 0).has_value());
    CHECK_FALSE(effective_index_2d(narrow, 1550.0, 1).has_value());
}

TEST_CASE("group index exceeds effective index for normal dispersion") {
    WaveguideGeometry g;
    const auto n = effective_index_2d(g, 1550.0, 0);
    const auto ng = group_index(g, 1550.0, 0);
    REQUIRE(n.has_value());
    REQUIRE(ng.has_value());
    CHECK(*ng > n->n_eff);
    CHECK(*ng < 5.0);
}

TEST_CASE("width sensitivity is positive and finite") {
    WaveguideGeometry g;
    for (int order = 0; order <= 1; ++order) {
        const auto s = dneff_dwidth(g, 1550.0, order);
        REQUIRE(s.has_value());
        CHECK(*s > 0.0);
        CHECK(*s < 1e-2);
    }
}

TEST_CASE("tabulated dispersion reproduces the live geometry solve") {
    WaveguideGeometry g;
    const auto live = DispersionModel::from_geometry(g);
    const auto tab = live.tabulated(1500.0, 1600.0, 1.0, 1);
    for (double l : {1500.0, 1537.25, 1550.0, 1581.5, 1600.0}) {
        for (int order = 0; order <= 1; ++order) {
            CHECK(std::abs(tab.index(l, order) - live.index(l, order)) < 1e-6);
        }
    }
}

TEST_CASE("constant and table dispersion models") {
    const auto c = DispersionModel::constant({2.75, 2.55});
    CHECK(c.index(1550.0, 0) == 2.75);
    CHECK(c.index(1300.0, 1) == 2.55);

    const auto t = DispersionModel::table({1500.0, 1600.0},
                                          {{2.8, 2.7}, {2.6, 2.5}});
    CHECK(t.index(1550.0, 0) == doctest::Approx(2.75).epsilon(1e-12));
    CHECK(t.index(1550.0, 1) == doctest::Approx(2.55).epsilon(1e-12));
}
