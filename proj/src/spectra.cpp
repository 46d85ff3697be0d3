#include "braggcascade/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bragg {

namespace {

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    double hi = v[n / 2];
    if (n % 2 == 1)
        return hi;
    std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
    return 0.5 * (v[n / 2 - 1] + hi);
}

// Vertex of the parabola through three samples; falls back to the middle
// point when the triple is degenerate.
double parabolic_vertex(double x0, double y0, double x1, double y1, double x2,
                        double y2) {
    const double a = (x1 - x0) * (y1 - y2);
    const double b = (x1 - x2) * (y1 - y0);
    const double denom = a - b;
    if (denom == 0.0)
        return x1;
    return x1 - 0.5 * ((x1 - x0) * a - (x1 - x2) * b) / denom;
}

std::size_t min_index(const std::vector<double>& v) {
    return static_cast<std::size_t>(
        std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

double Spectrum::transmission_linear(std::size_t i) const {
    if (domain != SpectrumDomain::LinearTransmission)
        throw std::logic_error("transmission_linear: spectrum is in the dBm domain");
    return std::pow(10.0, values_db.at(i) / 10.0);
}

void Spectrum::validate() const {
    if (wavelengths_nm.size() != values_db.size())
        throw std::invalid_argument("spectrum: grid/value size mismatch");
    if (wavelengths_nm.size() < 2)
        throw std::invalid_argument("spectrum: need at least two points");
    for (std::size_t i = 1; i < wavelengths_nm.size(); ++i)
        if (!(wavelengths_nm[i] > wavelengths_nm[i - 1]))
            throw std::invalid_argument("spectrum: wavelengths must be strictly increasing");
    if (domain == SpectrumDomain::LinearTransmission) {
        for (double v : values_db)
            if (v > 1e-9)
                throw std::invalid_argument("spectrum: transmission above unity");
    }
}

void MeasurementChain::validate() const {
    if (!(detector_floor_dbm < source_power_dbm))
        throw std::invalid_argument("measurement chain: floor must lie below the source power");
    if (coupling_loss_db < 0.0)
        throw std::invalid_argument("measurement chain: coupling loss must be >= 0");
}

Spectrum apply_measurement_chain(const Spectrum& spectrum,
                                 const MeasurementChain& chain) {
    spectrum.validate();
    chain.validate();
    Spectrum out = spectrum;
    out.domain = SpectrumDomain::PowerDbm;
    out.floor_dbm = chain.detector_floor_dbm;
    const double offset = spectrum.domain == SpectrumDomain::LinearTransmission
                              ? chain.source_power_dbm - 2.0 * chain.coupling_loss_db
                              : 0.0;
    for (double& v : out.values_db)
        v = std::max(v + offset, chain.detector_floor_dbm);
    return out;
}

RejectionResult extract_rejection_db(const Spectrum& spectrum,
                                     const std::vector<Band>& offband_windows) {
    spectrum.validate();
    std::vector<double> offband;
    for (std::size_t i = 0; i < spectrum.wavelengths_nm.size(); ++i) {
        const double l = spectrum.wavelengths_nm[i];
        for (const Band& w : offband_windows) {
            if (l >= w.lo_nm && l <= w.hi_nm) {
                offband.push_back(spectrum.values_db[i]);
                break;
            }
        }
    }
    if (offband.empty())
        throw WindowOutOfRange("extract_rejection_db: off-band window misses the grid");

    // The minimum may legitimately sit at the grid edge under strong noise
    // (the notch wanders); the rejection is still the depth within the window.
    const std::size_t imin = min_index(spectrum.values_db);

    RejectionResult res;
    res.offband_level_db = median(std::move(offband));
    res.notch_level_db = spectrum.values_db[imin];
    res.rejection_db = res.offband_level_db - res.notch_level_db;
    res.clipped = spectrum.domain == SpectrumDomain::PowerDbm &&
                  res.notch_level_db <= spectrum.floor_dbm + 1e-9;
    return res;
}

RejectionResult extract_rejection_db(const Spectrum& spectrum, Band offband_window) {
    return extract_rejection_db(spectrum, std::vector<Band>{offband_window});
}

double extract_bandwidth_nm(const Spectrum& spectrum, BandwidthCriterion criterion,
                            double offband_level_db) {
    spectrum.validate();
    const auto& xs = spectrum.wavelengths_nm;
    const auto& ys = spectrum.values_db;
    const std::size_t n = xs.size();
    const std::size_t imin = min_index(ys);
    if (imin == 0 || imin + 1 == n)
        throw NoNotchFound("extract_bandwidth_nm: notch minimum at the grid edge");

    if (criterion == BandwidthCriterion::NullToNull) {
        const auto is_local_max = [&](std::size_t i) {
            return i > 0 && i + 1 < n && ys[i] >= ys[i - 1] && ys[i] >= ys[i + 1];
        };
        std::size_t left = imin;
        while (left > 0 && !is_local_max(left)) --left;
        std::size_t right = imin;
        while (right + 1 < n && !is_local_max(right)) ++right;
        if (!is_local_max(left) || !is_local_max(right))
            throw WindowOutOfRange("extract_bandwidth_nm: flanking maxima outside grid");
        const double xl = parabolic_vertex(xs[left - 1], ys[left - 1], xs[left],
                                           ys[left], xs[left + 1], ys[left + 1]);
        const double xr = parabolic_vertex(xs[right - 1], ys[right - 1], xs[right],
                                           ys[right], xs[right + 1], ys[right + 1]);
        return xr - xl;
    }

    double reference = offband_level_db;
    if (std::isnan(reference)) {
        // Default reference: median of the outer 5% of points on each side.
        const std::size_t k = std::max<std::size_t>(3, n / 20);
        std::vector<double> edges(ys.begin(), ys.begin() + k);
        edges.insert(edges.end(), ys.end() - k, ys.end());
        reference = median(std::move(edges));
    }
    const double threshold = reference - 3.0;
    if (!(ys[imin] < threshold))
        throw NotchTooShallow("extract_bandwidth_nm: notch depth below 3 dB");

    const auto crossing = [&](std::size_t a, std::size_t b) {
        const double t = (threshold - ys[a]) / (ys[b] - ys[a]);
        return xs[a] + t * (xs[b] - xs[a]);
    };
    std::size_t i = imin;
    while (i > 0 && ys[i] < threshold) --i;
    if (ys[i] < threshold)
        throw WindowOutOfRange("extract_bandwidth_nm: left 3 dB crossing outside grid");
    const double xl = crossing(i, i + 1);
    i = imin;
    while (i + 1 < n && ys[i] < threshold) ++i;
    if (ys[i] < threshold)
        throw WindowOutOfRange("extract_bandwidth_nm: right 3 dB crossing outside grid");
    const double xr = crossing(i - 1, i);
    return xr - xl;
}

double extract_center_nm(const Spectrum& spectrum) {
    spectrum.validate();
    const auto& ys = spectrum.values_db;
    const double depth = *std::max_element(ys.begin(), ys.end()) -
                         *std::min_element(ys.begin(), ys.end());
    if (depth < 0.1)
        throw NoNotchFound("extract_center_nm: spectrum flat within 0.1 dB");
    const std::size_t i = min_index(ys);
    if (i == 0 || i + 1 == ys.size())
        throw NoNotchFound("extract_center_nm: minimum at the grid edge");
    const auto& xs = spectrum.wavelengths_nm;
    return parabolic_vertex(xs[i - 1], ys[i - 1], xs[i], ys[i], xs[i + 1],
                            ys[i + 1]);
}

void write_spectrum_csv(const std::string& path, const Spectrum& spectrum) {
    spectrum.validate();
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_spectrum_csv: cannot open " + path);
    out << "wavelength_nm,transmission_linear,transmission_db\n";
    char buf[128];
    for (std::size_t i = 0; i < spectrum.wavelengths_nm.size(); ++i) {
        const double db = spectrum.values_db[i];
        const double lin = std::pow(10.0, db / 10.0);
        std::snprintf(buf, sizeof buf, "%.9f,%.12e,%.12g\n",
                      spectrum.wavelengths_nm[i], lin, db);
        out << buf;
    }
    if (!out)
        throw std::runtime_error("write_spectrum_csv: write failed for " + path);

    nlohmann::json meta;
    meta["domain"] = spectrum.domain == SpectrumDomain::LinearTransmission
                         ? "linear_transmission"
                         : "power_dbm";
    if (std::isfinite(spectrum.floor_dbm))
        meta["floor_dbm"] = spectrum.floor_dbm;
    meta["composition"] = spectrum.composition;
    meta["realization_id"] = spectrum.realization_id;
    meta["cascade_hash"] = spectrum.cascade_hash;
    meta["points"] = spectrum.wavelengths_nm.size();
    meta["grid_min_nm"] = spectrum.wavelengths_nm.front();
    meta["grid_max_nm"] = spectrum.wavelengths_nm.back();
    std::ofstream side(path + ".json");
    side << meta.dump(2) << "\n";
}

Spectrum read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_spectrum_csv: cannot open " + path);
    Spectrum s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            if (line.rfind("wavelength_nm,", 0) != 0)
                throw std::runtime_error("read_spectrum_csv: bad header at line 1");
            continue;
        }
        if (line.empty())
            continue;
        double l, lin, db;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &l, &lin, &db) != 3)
            throw std::runtime_error("read_spectrum_csv: malformed row at line " +
                                     std::to_string(lineno));
        s.wavelengths_nm.push_back(l);
        s.values_db.push_back(db);
    }

    std::ifstream side(path + ".json");
    if (side) {
        nlohmann::json meta = nlohmann::json::parse(side, nullptr, false);
        if (!meta.is_discarded()) {
            if (meta.value("domain", "linear_transmission") == "power_dbm")
                s.domain = SpectrumDomain::PowerDbm;
            s.floor_dbm = meta.value("floor_dbm", s.floor_dbm);
            s.composition = meta.value("composition", s.composition);
            s.realization_id = meta.value("realization_id", s.realization_id);
            s.cascade_hash = meta.value("cascade_hash", s.cascade_hash);
        }
    }
    s.validate();
    return s;
}

}  // namespace bragg
