#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "braggcascade/errors.hpp"

namespace bragg {

enum class SpectrumDomain { LinearTransmission, PowerDbm };
enum class BandwidthCriterion { ThreeDb, NullToNull };

struct Band {
    double lo_nm = 0.0;
    double hi_nm = 0.0;
};

/// Sampled spectrum. values_db is the authoritative storage: transmission in
/// dB (<= 0) for the linear domain, received power in dBm after a measurement
/// chain. Keeping dB avoids underflow when incoherent cascades push the true
/// transmission below the double range.
struct Spectrum {
    std::vector<double> wavelengths_nm;
    std::vector<double> values_db;
    SpectrumDomain domain = SpectrumDomain::LinearTransmission;
    double floor_dbm = -std::numeric_limits<double>::infinity();

    std::string composition = "single";
    std::uint64_t realization_id = 0;
    std::string cascade_hash;

    double transmission_linear(std::size_t i) const;
    void validate() const;
};

struct MeasurementChain {
    double source_power_dbm = 10.0;
    double coupling_loss_db = 0.0;  // per facet
    double detector_floor_dbm = -75.0;

    void validate() const;
};

/// received(lambda) = source - 2*coupling + T_dB(lambda), clipped at the
/// detector floor. Idempotent on already-measured spectra.
Spectrum apply_measurement_chain(const Spectrum& spectrum,
                                 const MeasurementChain& chain);

struct RejectionResult {
    double rejection_db = 0.0;
    double offband_level_db = 0.0;  // dB or dBm depending on domain
    double notch_level_db = 0.0;
    bool clipped = false;
};

/// rejection = median off-band level - in-band minimum, both in dB. The
/// clipped flag is set when the minimum sits at the detector floor.
RejectionResult extract_rejection_db(const Spectrum& spectrum,
                                     const std::vector<Band>& offband_windows);
RejectionResult extract_rejection_db(const Spectrum& spectrum, Band offband_window);

/// 3 dB: width between the crossings of (off-band level - 3 dB) flanking the
/// minimum, linearly interpolated. Null-to-null: distance between the two
/// local maxima flanking the notch, parabolically refined.
double extract_bandwidth_nm(const Spectrum& spectrum, BandwidthCriterion criterion,
                            double offband_level_db =
                                std::numeric_limits<double>::quiet_NaN());

/// Wavelength of minimum transmission, parabolic refinement over the three
/// nearest points. Throws NoNotchFound on spectra flat within 0.1 dB.
double extract_center_nm(const Spectrum& spectrum);

/// CSV with header wavelength_nm,transmission_linear,transmission_db plus a
/// JSON sidecar (same path with .json appended) for the metadata.
void write_spectrum_csv(const std::string& path, const Spectrum& spectrum);
Spectrum read_spectrum_csv(const std::string& path);

}  // namespace bragg
