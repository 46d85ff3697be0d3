#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "braggcascade/cmt.hpp"
#include "braggcascade/spectra.hpp"

using namespace bragg;

namespace {

// Uniform-grating transmission spectrum on a detuning-mapped grid.
Spectrum closed_form_spectrum(double kappa, double length, double lambda0,
                              double span, double step, double dddl) {
    Spectrum s;
    for (double off = -span; off <= span + 0.5 * step; off += step) {
        const double delta = -dddl * off;
        const auto amp = uniform_grating_response(kappa, length, delta);
        s.wavelengths_nm.push_back(lambda0 + off);
        s.values_db.push_back(10.0 * std::log10(std::norm(amp.t)));
    }
    return s;
}

constexpr double kDddl = 6.98e-6;  // |d delta / d lambda| for the test grating

}  // namespace

TEST_CASE("rejection extraction reproduces the kL = 2 anchor") {
    // kL = 2 -> 11.505 dB. Off-band far enough that sidelobes are < 1e-3 dB.
    const double kappa = 2e-5, length = 100000.0;
    auto s = closed_form_spectrum(kappa, length, 1550.0, 450.0, 0.02, kDddl);
    const std::vector<Band> offband = {{1100.0, 1140.0}, {1960.0, 2000.0}};
    const auto rej = extract_rejection_db(s, offband);
    CHECK(rej.rejection_db == doctest::Approx(11.5088).epsilon(5e-4));
    CHECK_FALSE(rej.clipped);
}

TEST_CASE("off-band window away from the grid is rejected") {
    auto s = closed_form_spectrum(2e-5, 100000.0, 1550.0, 10.0, 0.1, kDddl);
    CHECK_THROWS_AS(extract_rejection_db(s, Band{900.0, 950.0}), WindowOutOfRange);
}

TEST_CASE("measurement chain caps rejection at the detector floor") {
    // True rejection 100 dB, CT400-style chain: 10 dBm source, -75 dBm floor
    // -> apparent rejection 85 dB and the clipped flag.
    Spectrum s;
    for (double off = -5.0; off <= 5.0; off += 0.01) {
        s.wavelengths_nm.push_back(1550.0 + off);
        s.values_db.push_back(std::abs(off) < 0.2 ? -100.0 : 0.0);
    }
    MeasurementChain chain;  // 10 dBm, floor -75 dBm
    const auto measured = apply_measurement_chain(s, chain);
    CHECK(measured.domain == SpectrumDomain::PowerDbm);
    const auto rej = extract_rejection_db(measured, Band{1545.0, 1547.0});
    CHECK(rej.rejection_db == doctest::Approx(85.0).epsilon(1e-9));
    CHECK(rej.clipped);

    // Idempotent: measuring a measured spectrum changes nothing.
    const auto again = apply_measurement_chain(measured, chain);
    for (std::size_t i = 0; i < measured.values_db.size(); ++i)
        CHECK(again.values_db[i] == measured.values_db[i]);
}

TEST_CASE("3 dB bandwidth against an analytic notch") {
    // Gaussian notch in dB: depth D, 1/e half width w; 3 dB width is
    // 2 w sqrt(ln(D/3)).
    const double depth = 30.0, w = 1.5;
    Spectrum s;
    for (double off = -12.0; off <= 12.0; off += 0.004) {
        s.wavelengths_nm.push_back(1550.0 + off);
        s.values_db.push_back(-depth * std::exp(-off * off / (w * w)));
    }
    const double expected = 2.0 * w * std::sqrt(std::log(depth / 3.0));
    CHECK(extract_bandwidth_nm(s, BandwidthCriterion::ThreeDb, 0.0) ==
          doctest::Approx(expected).epsilon(1e-3));

    Spectrum shallow = s;
    for (auto& v : shallow.values_db)
        v *= 0.05;  // 1.5 dB deep
    CHECK_THROWS_AS(extract_bandwidth_nm(shallow, BandwidthCriterion::ThreeDb, 0.0),
                    NotchTooShallow);
}

TEST_CASE("null-to-null bandwidth matches the closed-form expression") {
    const double kappa = 5e-5, length = 120000.0, lambda0 = 1550.0;
    auto s = closed_form_spectrum(kappa, length, lambda0, 40.0, 0.001, kDddl);
    const double measured = extract_bandwidth_nm(s, BandwidthCriterion::NullToNull);
    // Null detunings +-sqrt(k^2 + (pi/L)^2) mapped through kDddl.
    const double dnull =
        std::sqrt(kappa * kappa + std::pow(std::numbers::pi / length, 2.0));
    const double expected = 2.0 * dnull / kDddl;
    CHECK(measured == doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("center extraction refines between grid points") {
    Spectrum s;
    const double center = 1550.1234;
    for (double off = -3.0; off <= 3.0; off += 0.01) {
        const double x = 1550.0 + off;
        s.wavelengths_nm.push_back(x);
        s.values_db.push_back(-20.0 * std::exp(-std::pow((x - center) / 0.8, 2.0)));
    }
    CHECK(extract_center_nm(s) == doctest::Approx(center).epsilon(1e-6));

    Spectrum flat;
    flat.wavelengths_nm = {1500.0, 1550.0, 1600.0};
    flat.values_db = {-0.01, -0.02, -0.01};
    CHECK_THROWS_AS(extract_center_nm(flat), NoNotchFound);
}

TEST_CASE("CSV round trip preserves values and metadata") {
    auto s = closed_form_spectrum(1e-4, 50000.0, 1550.0, 20.0, 0.05, kDddl);
    s.composition = "incoherent";
    s.realization_id = 42;
    s.cascade_hash = "00deadbeef001234";
    const std::string path = "roundtrip_test.csv";
    write_spectrum_csv(path, s);
    const auto back = read_spectrum_csv(path);
    REQUIRE(back.wavelengths_nm.size() == s.wavelengths_nm.size());
    for (std::size_t i = 0; i < s.wavelengths_nm.size(); ++i) {
        CHECK(back.wavelengths_nm[i] == doctest::Approx(s.wavelengths_nm[i]).epsilon(1e-12));
        CHECK(back.values_db[i] == doctest::Approx(s.values_db[i]).epsilon(1e-9));
    }
    CHECK(back.composition == "incoherent");
    CHECK(back.realization_id == 42);
    CHECK(back.cascade_hash == "00deadbeef001234");
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
}

TEST_CASE("malformed CSV rows are reported with their line number") {
    const std::string path = "malformed_test.csv";
    {
        std::ofstream out(path);
        out << "wavelength_nm,transmission_linear,transmission_db\n";
        out << "1550.0,1.0,0.0\n";
        out << "1550.1,not_a_number,0.0\n";
    }
    bool threw = false;
    try {
        read_spectrum_csv(path);
    } catch (const std::exception& e) {
        threw = true;
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    CHECK(threw);
    std::remove(path.c_str());
}
