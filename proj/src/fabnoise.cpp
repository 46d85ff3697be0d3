#include "braggcascade/fabnoise.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace bragg {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic standard-normal stream: splitmix64 driving Box-Muller.
/// Hand-rolled so realizations are reproducible across standard libraries.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : state_(seed) {}

    double next() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform_open() {
        // (0, 1]: never feeds log() a zero.
        const std::uint64_t bits = splitmix64(state_) >> 11;
        return (static_cast<double>(bits) + 1.0) * 0x1p-53;
    }

    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

std::uint64_t trial_seed(const NoiseModel& model, std::uint64_t trial) {
    std::uint64_t s = model.seed ^ (0xD1B54A32D192ED03ull * (trial + 1));
    return splitmix64(s);
}

std::vector<double> ar1_chain(NormalRng& rng, std::size_t n, double sigma,
                              double rho) {
    std::vector<double> out(n);
    if (n == 0)
        return out;
    const double innovation = sigma * std::sqrt(std::max(0.0, 1.0 - rho * rho));
    out[0] = sigma * rng.next();
    for (std::size_t i = 1; i < n; ++i)
        out[i] = rho * out[i - 1] + innovation * rng.next();
    return out;
}

double percentile(std::vector<double> sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 0)
        return 0.0;
    const double pos = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double t = pos - static_cast<double>(lo);
    return sorted[lo] + t * (sorted[hi] - sorted[lo]);
}

}  // namespace

double bypass_floor(const NoiseModel& model, const GratingSpec& spec,
                    double dneff_dwidth_per_nm) {
    if (!(model.sigma_width_nm > 0.0) || !(spec.kappa_per_nm > 0.0))
        return 0.0;
    // Double-scattering estimate: the backward mode is re-scattered into the
    // forward mode by the same roughness at rate sigma_delta^2 * Lc, over an
    // interaction length capped by the grating penetration depth 1/(2 kappa).
    // The cap is what makes the floor independent of section length.
    const double lambda_ref = 1550.0;
    const double sigma_delta = std::numbers::pi * dneff_dwidth_per_nm *
                               model.sigma_width_nm / lambda_ref;
    const double interaction =
        std::min(spec.length_nm, 0.5 / spec.kappa_per_nm);
    return std::min(0.5, sigma_delta * sigma_delta *
                             model.correlation_length_nm * interaction);
}

void NoiseModel::validate() const {
    if (!(sigma_width_nm >= 0.0))
        throw std::invalid_argument("noise: sigma_width must be >= 0");
    if (!(correlation_length_nm > 0.0))
        throw std::invalid_argument("noise: correlation_length must be positive");
    if (!(wafer_bias_sigma_nm >= 0.0))
        throw std::invalid_argument("noise: wafer_bias_sigma must be >= 0");
}

Realization sample_cascade_realization(const NoiseModel& model,
                                       const CascadeSpec& cascade,
                                       double dneff_dwidth_per_nm,
                                       double segment_length_nm,
                                       std::uint64_t trial) {
    model.validate();
    cascade.validate();
    NormalRng rng(trial_seed(model, trial));

    // Draw order is part of the determinism contract: bias, links, sections.
    const double bias = model.wafer_bias_sigma_nm * rng.next();

    Realization real;
    real.id = trial;
    real.link_delta_neff.resize(cascade.link_lengths_nm.size());
    for (double& d : real.link_delta_neff)
        d = dneff_dwidth_per_nm * (bias + model.sigma_width_nm * rng.next());

    real.section_perturbations.reserve(cascade.sections.size());
    real.section_bypass.reserve(cascade.sections.size());
    for (const auto& spec : cascade.sections) {
        const std::size_t n = segment_count(spec, segment_length_nm);
        const double ell = spec.length_nm / static_cast<double>(n);
        const double rho = std::exp(-ell / model.correlation_length_nm);
        auto widths = ar1_chain(rng, n, model.sigma_width_nm, rho);
        for (double& w : widths)
            w = dneff_dwidth_per_nm * (w + bias);
        real.section_perturbations.push_back(std::move(widths));
        real.section_bypass.push_back(
            bypass_floor(model, spec, dneff_dwidth_per_nm));
    }
    return real;
}

std::vector<double> sample_realization(const NoiseModel& model,
                                       const GratingSpec& spec,
                                       double dneff_dwidth_per_nm,
                                       double segment_length_nm,
                                       std::uint64_t trial) {
    CascadeSpec single;
    single.sections = {spec};
    single.composition = Composition::Incoherent;
    return sample_cascade_realization(model, single, dneff_dwidth_per_nm,
                                      segment_length_nm, trial)
        .section_perturbations[0];
}

EnsembleStats monte_carlo(const CascadeSpec& cascade, const NoiseModel& model,
                          int trials, const std::vector<double>& grid_nm,
                          const DispersionModel& dispersion,
                          const McOptions& options) {
    if (trials < 1)
        throw std::invalid_argument("monte_carlo: trials must be >= 1");
    if (options.offband.empty())
        throw std::invalid_argument("monte_carlo: off-band windows required");

    std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trials)
                return;
            const auto real = sample_cascade_realization(
                model, cascade, options.dneff_dwidth_per_nm,
                options.segment_length_nm, static_cast<std::uint64_t>(t));
            const auto spectrum = cascade_spectrum(cascade, grid_nm, dispersion,
                                                   &real, options.segment_length_nm);
            TrialRecord rec;
            rec.trial = static_cast<std::uint64_t>(t);
            const auto rej = extract_rejection_db(spectrum, options.offband);
            rec.rejection_db = rej.rejection_db;
            rec.clipped = rej.clipped;
            try {
                rec.bandwidth_nm = extract_bandwidth_nm(
                    spectrum, options.bandwidth_criterion, rej.offband_level_db);
                rec.bandwidth_valid = true;
            } catch (const NotchTooShallow&) {
            } catch (const WindowOutOfRange&) {
            } catch (const NoNotchFound&) {
            }
            records[static_cast<std::size_t>(t)] = rec;
        }
    };

    const int n_threads = std::max(1, options.threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    EnsembleStats stats;
    stats.trials = trials;
    stats.records = std::move(records);
    std::vector<double> rej;
    std::vector<double> bw;
    rej.reserve(stats.records.size());
    for (const auto& r : stats.records) {
        rej.push_back(r.rejection_db);
        if (r.bandwidth_valid)
            bw.push_back(r.bandwidth_nm);
    }
    std::sort(rej.begin(), rej.end());
    stats.median_rejection_db = percentile(rej, 0.5);
    stats.p5_rejection_db = percentile(rej, 0.05);
    stats.p25_rejection_db = percentile(rej, 0.25);
    stats.p75_rejection_db = percentile(rej, 0.75);
    stats.p95_rejection_db = percentile(rej, 0.95);
    std::sort(bw.begin(), bw.end());
    stats.median_bandwidth_nm = percentile(bw, 0.5);
    return stats;
}

double effective_group_index(const GratingSpec& spec,
                             const DispersionModel& dispersion,
                             double wavelength_nm, double h_nm) {
    const double sp = index_sum(spec, dispersion, wavelength_nm + h_nm);
    const double sm = index_sum(spec, dispersion, wavelength_nm - h_nm);
    const double s0 = index_sum(spec, dispersion, wavelength_nm);
    return 0.5 * (s0 - wavelength_nm * (sp - sm) / (2.0 * h_nm));
}

MetricGrid make_metric_grid(double lambda0_nm, double notch_halfwidth_nm,
                            double dense_step_nm, double offband_offset_nm,
                            double offband_width_nm, double offband_step_nm) {
    MetricGrid g;
    const auto block = [&g](double lo, double hi, double step) {
        for (double l = lo; l <= hi + 0.5 * step; l += step)
            g.wavelengths_nm.push_back(l);
    };
    block(lambda0_nm - offband_offset_nm - offband_width_nm,
          lambda0_nm - offband_offset_nm, offband_step_nm);
    block(lambda0_nm - notch_halfwidth_nm, lambda0_nm + notch_halfwidth_nm,
          dense_step_nm);
    block(lambda0_nm + offband_offset_nm,
          lambda0_nm + offband_offset_nm + offband_width_nm, offband_step_nm);
    std::sort(g.wavelengths_nm.begin(), g.wavelengths_nm.end());
    g.wavelengths_nm.erase(
        std::unique(g.wavelengths_nm.begin(), g.wavelengths_nm.end()),
        g.wavelengths_nm.end());
    g.offband = {
        {lambda0_nm - offband_offset_nm - offband_width_nm,
         lambda0_nm - offband_offset_nm},
        {lambda0_nm + offband_offset_nm,
         lambda0_nm + offband_offset_nm + offband_width_nm},
    };
    return g;
}

MetricGrid default_metric_grid(const GratingSpec& spec,
                               const DispersionModel& dispersion,
                               double dense_points) {
    const auto bragg = bragg_wavelength(spec, dispersion);
    const double n_g = effective_group_index(spec, dispersion, bragg.lambda0_nm);
    const double bw =
        bandwidth_nm(bragg.lambda0_nm, n_g, spec.kappa_per_nm, spec.length_nm);
    const double halfwidth = 1.6 * bw;
    const double step = std::max(1e-3, 2.0 * halfwidth / dense_points);
    const double offset = std::max(4.0 * bw, 8.0);
    return make_metric_grid(bragg.lambda0_nm, halfwidth, step, offset,
                            std::max(2.0, 0.5 * bw), std::max(0.05, bw / 40.0));
}

std::vector<std::pair<double, double>> saturation_curve(
    const std::vector<double>& lengths_nm, const NoiseModel& model, int trials,
    SaturationMode mode, const GratingSpec& base_spec, double section_length_nm,
    const DispersionModel& dispersion, const McOptions& options) {
    if (!std::is_sorted(lengths_nm.begin(), lengths_nm.end()))
        throw std::invalid_argument("saturation_curve: lengths must be ascending");

    std::vector<std::pair<double, double>> curve;
    curve.reserve(lengths_nm.size());
    for (double total : lengths_nm) {
        CascadeSpec cascade;
        if (mode == SaturationMode::SingleSection) {
            GratingSpec spec = base_spec;
            spec.length_nm = total;
            cascade.sections = {spec};
            cascade.composition = Composition::Incoherent;
        } else {
            const int n = std::max(
                1, static_cast<int>(std::ceil(total / section_length_nm)));
            GratingSpec spec = base_spec;
            spec.length_nm = section_length_nm;
            cascade.sections.assign(static_cast<std::size_t>(n), spec);
            cascade.link_lengths_nm.assign(static_cast<std::size_t>(n - 1), 20000.0);
            cascade.composition = Composition::Incoherent;
        }

        McOptions opts = options;
        auto grid = default_metric_grid(cascade.sections[0], dispersion);
        if (opts.offband.empty())
            opts.offband = grid.offband;
        const auto stats = monte_carlo(cascade, model, trials,
                                       grid.wavelengths_nm, dispersion, opts);
        curve.emplace_back(total, stats.median_rejection_db);
    }
    return curve;
}

NoiseModel calibrate_sigma(double target_plateau_db, double plateau_onset_nm,
                           const GratingSpec& spec, int trials,
                           const DispersionModel& dispersion,
                           const McOptions& options, const NoiseModel& base) {
    base.validate();
    if (!(target_plateau_db > 0.0) || !(plateau_onset_nm >= spec.period_nm))
        throw std::invalid_argument("calibrate_sigma: bad target or onset");

    const double noiseless =
        peak_rejection_db(spec.kappa_per_nm, plateau_onset_nm);
    if (noiseless <= target_plateau_db)
        throw CalibrationFailed(
            "calibrate_sigma: target exceeds the noiseless rejection at onset");

    const std::vector<double> lengths = {plateau_onset_nm,
                                         plateau_onset_nm * 4.0 / 3.0,
                                         plateau_onset_nm * 5.0 / 3.0};
    const auto objective = [&](double sigma) {
        NoiseModel m = base;
        m.sigma_width_nm = sigma;
        const auto curve =
            saturation_curve(lengths, m, trials, SaturationMode::SingleSection,
                             spec, 0.0, dispersion, options);
        double mean = 0.0;
        for (const auto& [len, rej] : curve)
            mean += rej;
        return mean / static_cast<double>(curve.size());
    };

    // Rejection degrades monotonically with sigma; establish a bracket by
    // doubling, then bisect.
    double lo = 0.0;
    double hi = 0.25;  // nm; a barely perturbed process
    double f_hi = objective(hi);
    int doublings = 0;
    while (f_hi > target_plateau_db) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 16)
            throw CalibrationFailed("calibrate_sigma: no bracket below 16 um sigma");
        f_hi = objective(hi);
    }

    for (int i = 0; i < 12; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = objective(mid);
        if (std::abs(f - target_plateau_db) < 0.5) {
            lo = hi = mid;
            break;
        }
        if (f > target_plateau_db)
            lo = mid;
        else
            hi = mid;
    }

    NoiseModel out = base;
    out.sigma_width_nm = 0.5 * (lo + hi);
    const double achieved = objective(out.sigma_width_nm);
    if (std::abs(achieved - target_plateau_db) > 2.0)
        throw CalibrationFailed("calibrate_sigma: could not settle within 2 dB of target");
    return out;
}

}  // namespace bragg
