#include <doctest.h>

#include <cmath>
#include <complex>

#include "braggcascade/cmt.hpp"

using namespace bragg;

TEST_CASE("peak rejection closed form") {
    // R = tanh^2(kL); rejection = -10 log10(1 - R) = 20 log10(cosh(kL)).
    CHECK(peak_rejection_db(0.0, 1000.0) == doctest::Approx(0.0).epsilon(1e-15));
    for (double kl : {0.5, 2.0, 5.3, 10.0}) {
        const double expected = 20.0 * std::log10(std::cosh(kl));
        CHECK(peak_rejection_db(kl / 1000.0, 1000.0) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
    // kL = 2 anchor: 11.50 dB.
    CHECK(peak_rejection_db(2e-5, 100000.0) == doctest::Approx(11.5088).epsilon(1e-4));
}

TEST_CASE("asymptotic branch is continuous at large kL") {
    const double below = peak_rejection_db(19.999 / 1000.0, 1000.0);
    const double above = peak_rejection_db(20.001 / 1000.0, 1000.0);
    CHECK(std::abs(above - below) < 0.02);
    // Deep grating: rejection ~ 8.686 kL - 6.02 dB.
    const double deep = peak_rejection_db(1e-4, 500000.0);  // kL = 50
    CHECK(deep == doctest::Approx(20.0 * 50.0 / std::log(10.0) +
                                  20.0 * std::log10(0.5))
                      .epsilon(1e-9));
}

TEST_CASE("bandwidth expression and its inverse") {
    const double lambda0 = 1550.0, n_g = 3.7;
    for (double kappa : {1e-5, 5e-5, 2e-4}) {
        for (double length : {50000.0, 250000.0}) {
            const double bw = bandwidth_nm(lambda0, n_g, kappa, length);
            const double expected =
                lambda0 * lambda0 / (std::numbers::pi * n_g) *
                std::sqrt(kappa * kappa +
                          std::pow(std::numbers::pi / length, 2.0));
            CHECK(bw == doctest::Approx(expected).epsilon(1e-14));
            const double back = kappa_from_bandwidth(bw, lambda0, n_g, length);
            CHECK(back == doctest::Approx(kappa).epsilon(1e-12));
        }
    }
    // Below the kappa = 0 floor the inversion is impossible.
    const double floor = bandwidth_nm(lambda0, n_g, 0.0, 100000.0);
    CHECK_THROWS_AS(kappa_from_bandwidth(0.99 * floor, lambda0, n_g, 100000.0),
                    BandwidthBelowLengthLimit);
}

TEST_CASE("uniform grating response conserves energy") {
    const double kappa = 8e-5, length = 120000.0;
    for (double delta = -8e-4; delta <= 8e-4; delta += 3.7e-6) {
        const auto s = uniform_grating_response(kappa, length, delta);
        const double sum = std::norm(s.r) + std::norm(s.t);
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("reflection nulls sit at the analytic detunings") {
    const double kappa = 5e-5, length = 200000.0;
    for (int m = 1; m <= 3; ++m) {
        const double delta = std::sqrt(
            kappa * kappa + std::pow(m * std::numbers::pi / length, 2.0));
        const auto s = uniform_grating_response(kappa, length, delta);
        CHECK(std::norm(s.r) < 1e-20);
    }
}

TEST_CASE("response is continuous across |delta| = kappa") {
    const double kappa = 1e-4, length = 50000.0;
    const auto lo = uniform_grating_response(kappa, length, kappa * (1.0 - 1e-9));
    const auto hi = uniform_grating_response(kappa, length, kappa * (1.0 + 1e-9));
    CHECK(std::abs(lo.t - hi.t) < 1e-7);
    CHECK(std::abs(lo.r - hi.r) < 1e-7);
}

TEST_CASE("Bragg wavelength with constant dispersion") {
    GratingSpec spec;
    spec.mode_pair = ModePair::Fundamental;
    const auto fun =
        bragg_wavelength(spec, DispersionModel::constant({2.75}), 1200.0, 1700.0);
    // lambda0 = 2 * period * n / p = 2 * 290 * 2.75 = 1595 nm.
    CHECK(fun.lambda0_nm == doctest::Approx(1595.0).epsilon(1e-10));
    CHECK(fun.n1 == doctest::Approx(2.75));

    spec.mode_pair = ModePair::Hybrid;
    const auto hyb = bragg_wavelength(
        spec, DispersionModel::constant({2.75, 2.55}), 1200.0, 1700.0);
    // lambda0 = period * (n1 + n2) / p = 290 * 5.30 = 1537 nm.
    CHECK(hyb.lambda0_nm == doctest::Approx(1537.0).epsilon(1e-10));
    CHECK(hyb.n2 == doctest::Approx(2.55));

    CHECK_THROWS_AS(
        bragg_wavelength(spec, DispersionModel::constant({2.75, 2.55}),
                         1200.0, 1400.0),
        NoResonanceInWindow);
}

TEST_CASE("detuning vanishes at the Bragg wavelength") {
    GratingSpec spec;
    const auto disp = DispersionModel::constant({2.75, 2.55});
    const auto sol = bragg_wavelength(spec, disp);
    CHECK(std::abs(detuning(sol.lambda0_nm, spec, disp)) < 1e-12);
    CHECK(detuning(sol.lambda0_nm - 1.0, spec, disp) > 0.0);
    CHECK(detuning(sol.lambda0_nm + 1.0, spec, disp) < 0.0);
}

TEST_CASE("perturbative kappa estimate is positive and duty-cycle shaped") {
    WaveguideGeometry g;
    GratingSpec spec;
    const double k50 = kappa_estimate(g, spec, 1550.0);
    CHECK(k50 > 0.0);
    spec.duty_cycle = 0.25;
    const double k25 = kappa_estimate(g, spec, 1550.0);
    CHECK(k25 < k50);  // sin(pi D) peaks at D = 0.5
}
