#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "braggcascade/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> grid_step_nm;
};

bragg::RunConfig load_config(const CliOverrides& cli) {
    bragg::RunConfig cfg = cli.config_path.empty()
                               ? bragg::RunConfig{}
                               : bragg::RunConfig::from_file(cli.config_path);
    if (cli.seed)
        cfg.noise.seed = *cli.seed;
    if (cli.trials)
        cfg.trials = *cli.trials;
    if (!cli.out_dir.empty())
        cfg.output_dir = cli.out_dir;
    if (cli.grid_step_nm) {
        if (!cfg.grid)
            cfg.grid = bragg::GridConfig{};
        cfg.grid->step_nm = *cli.grid_step_nm;
    }
    cfg.validate();
    return cfg;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path.string());
    out << doc.dump(2) << "\n";
}

fs::path ensure_out_dir(const bragg::RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory: " + dir.string());
    return dir;
}

double index_sum_width_sensitivity(const bragg::RunConfig& cfg, double lambda0) {
    bragg::WaveguideGeometry g = cfg.geometry;
    g.core_width_nm = cfg.grating.avg_width_nm;
    const auto s0 = bragg::dneff_dwidth(g, lambda0, 0);
    if (!s0)
        throw bragg::NoGuidedMode("width sensitivity: TE0 below cutoff");
    if (cfg.grating.mode_pair == bragg::ModePair::Fundamental)
        return 2.0 * *s0;
    const auto s1 = bragg::dneff_dwidth(g, lambda0, 1);
    if (!s1)
        throw bragg::NoGuidedMode("width sensitivity: TE1 below cutoff");
    return *s0 + *s1;
}

struct ResolvedGrid {
    std::vector<double> wavelengths;
    std::vector<bragg::Band> offband;
};

ResolvedGrid resolve_grid(const bragg::RunConfig& cfg,
                          const bragg::DispersionModel& dispersion) {
    ResolvedGrid out;
    if (cfg.grid) {
        for (double l = cfg.grid->min_nm; l <= cfg.grid->max_nm + 0.5 * cfg.grid->step_nm;
             l += cfg.grid->step_nm)
            out.wavelengths.push_back(l);
        // Outer tenth of an explicit grid serves as the off-band reference.
        const double span = cfg.grid->max_nm - cfg.grid->min_nm;
        out.offband = {{cfg.grid->min_nm, cfg.grid->min_nm + 0.1 * span},
                       {cfg.grid->max_nm - 0.1 * span, cfg.grid->max_nm}};
        return out;
    }
    const auto grid = bragg::default_metric_grid(cfg.grating, dispersion);
    out.wavelengths = grid.wavelengths_nm;
    out.offband = grid.offband;
    return out;
}

json spectrum_metrics(const bragg::Spectrum& spectrum,
                      const std::vector<bragg::Band>& offband) {
    json m;
    const auto rej = bragg::extract_rejection_db(spectrum, offband);
    m["rejection_db"] = rej.rejection_db;
    m["offband_level_db"] = rej.offband_level_db;
    m["notch_level_db"] = rej.notch_level_db;
    m["clipped"] = rej.clipped;
    try {
        m["bandwidth_3db_nm"] = bragg::extract_bandwidth_nm(
            spectrum, bragg::BandwidthCriterion::ThreeDb, rej.offband_level_db);
    } catch (const std::exception&) {
        m["bandwidth_3db_nm"] = nullptr;
    }
    try {
        m["bandwidth_null_nm"] = bragg::extract_bandwidth_nm(
            spectrum, bragg::BandwidthCriterion::NullToNull);
    } catch (const std::exception&) {
        m["bandwidth_null_nm"] = nullptr;
    }
    try {
        m["center_nm"] = bragg::extract_center_nm(spectrum);
    } catch (const std::exception&) {
        m["center_nm"] = nullptr;
    }
    return m;
}

bragg::McOptions make_mc_options(const bragg::RunConfig& cfg,
                                 const std::vector<bragg::Band>& offband,
                                 double lambda0) {
    bragg::McOptions opts;
    opts.dneff_dwidth_per_nm = index_sum_width_sensitivity(cfg, lambda0);
    opts.segment_length_nm = cfg.segment_length_nm;
    opts.threads = cfg.threads;
    opts.offband = offband;
    return opts;
}

int cmd_modes(const CliOverrides& cli) {
    const auto cfg = load_config(cli);
    const auto dir = ensure_out_dir(cfg);
    const double probe = 1550.0;

    json report;
    bragg::WaveguideGeometry g = cfg.geometry;
    g.core_width_nm = cfg.grating.avg_width_nm;
    for (int order = 0; order <= 1; ++order) {
        json mode;
        const auto sol = bragg::effective_index_2d(g, probe, order);
        mode["guided"] = sol.has_value();
        if (sol) {
            mode["n_eff"] = sol->n_eff;
            if (const auto ng = bragg::group_index(g, probe, order))
                mode["n_g"] = *ng;
            if (const auto s = bragg::dneff_dwidth(g, probe, order))
                mode["dneff_dwidth_per_nm"] = *s;
        }
        report[order == 0 ? "te0" : "te1"] = mode;
    }
    report["probe_wavelength_nm"] = probe;
    try {
        const auto dispersion = cfg.build_dispersion();
        const auto bragg_sol = bragg::bragg_wavelength(
            cfg.grating, dispersion, cfg.window_min_nm, cfg.window_max_nm);
        report["bragg_lambda0_nm"] = bragg_sol.lambda0_nm;
        report["bragg_n1"] = bragg_sol.n1;
        report["bragg_n2"] = bragg_sol.n2;
    } catch (const bragg::NoResonanceInWindow&) {
        report["bragg_lambda0_nm"] = nullptr;
    }

    write_json(dir / "modes.json", report);
    write_json(dir / "effective_config.json", cfg.to_effective_json());
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const CliOverrides& cli) {
    auto cfg = load_config(cli);
    const auto dir = ensure_out_dir(cfg);
    const auto dispersion = cfg.build_dispersion();
    const auto cascade = cfg.build_cascade();
    const auto grid = resolve_grid(cfg, dispersion);
    const auto bragg_sol = bragg::bragg_wavelength(cfg.grating, dispersion,
                                                   cfg.window_min_nm, cfg.window_max_nm);

    std::optional<bragg::Realization> realization;
    if (cfg.noise.sigma_width_nm > 0.0 || cfg.noise.wafer_bias_sigma_nm > 0.0) {
        const double sens = index_sum_width_sensitivity(cfg, bragg_sol.lambda0_nm);
        realization = bragg::sample_cascade_realization(
            cfg.noise, cascade, sens, cfg.segment_length_nm, 0);
    }

    const auto spectrum = bragg::cascade_spectrum(
        cascade, grid.wavelengths, dispersion,
        realization ? &*realization : nullptr, cfg.segment_length_nm);
    bragg::write_spectrum_csv((dir / "spectrum.csv").string(), spectrum);

    json metrics;
    metrics["true"] = spectrum_metrics(spectrum, grid.offband);
    if (cfg.measurement_enabled) {
        const auto measured = bragg::apply_measurement_chain(spectrum, cfg.measurement);
        bragg::write_spectrum_csv((dir / "measured.csv").string(), measured);
        metrics["measured"] = spectrum_metrics(measured, grid.offband);
    }
    metrics["bragg_lambda0_nm"] = bragg_sol.lambda0_nm;
    write_json(dir / "metrics.json", metrics);
    write_json(dir / "effective_config.json", cfg.to_effective_json());
    std::cout << metrics.dump(2) << "\n";
    return 0;
}

int cmd_montecarlo(const CliOverrides& cli) {
    auto cfg = load_config(cli);
    const auto dir = ensure_out_dir(cfg);
    const auto dispersion = cfg.build_dispersion();
    const auto cascade = cfg.build_cascade();
    const auto grid = resolve_grid(cfg, dispersion);
    const auto bragg_sol = bragg::bragg_wavelength(cfg.grating, dispersion,
                                                   cfg.window_min_nm, cfg.window_max_nm);
    auto opts = make_mc_options(cfg, grid.offband, bragg_sol.lambda0_nm);

    if (cfg.calibrate) {
        bragg::McOptions cal_opts = opts;
        cal_opts.offband.clear();  // per-length grids carry their own windows
        cfg.noise = bragg::calibrate_sigma(cfg.calibrate->target_db,
                                           cfg.calibrate->onset_nm, cfg.grating,
                                           cfg.trials, dispersion, cal_opts, cfg.noise);
    }

    const auto stats = bragg::monte_carlo(cascade, cfg.noise, cfg.trials,
                                          grid.wavelengths, dispersion, opts);

    json out;
    out["trials"] = stats.trials;
    out["median_rejection_db"] = stats.median_rejection_db;
    out["p5_rejection_db"] = stats.p5_rejection_db;
    out["p25_rejection_db"] = stats.p25_rejection_db;
    out["p75_rejection_db"] = stats.p75_rejection_db;
    out["p95_rejection_db"] = stats.p95_rejection_db;
    out["median_bandwidth_nm"] = stats.median_bandwidth_nm;
    out["sigma_width_nm"] = cfg.noise.sigma_width_nm;
    write_json(dir / "stats.json", out);

    std::ofstream trials_csv(dir / "trials.csv");
    if (!trials_csv)
        throw std::runtime_error("cannot open trials.csv");
    trials_csv << "trial,rejection_db,bandwidth_nm,bandwidth_valid,clipped\n";
    char buf[160];
    for (const auto& r : stats.records) {
        std::snprintf(buf, sizeof buf, "%llu,%.9f,%.9f,%d,%d\n",
                      static_cast<unsigned long long>(r.trial), r.rejection_db,
                      r.bandwidth_valid ? r.bandwidth_nm : 0.0,
                      r.bandwidth_valid ? 1 : 0, r.clipped ? 1 : 0);
        trials_csv << buf;
    }
    write_json(dir / "effective_config.json", cfg.to_effective_json());
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_design(const CliOverrides& cli) {
    auto cfg = load_config(cli);
    const auto dir = ensure_out_dir(cfg);
    const auto dispersion = cfg.build_dispersion();
    const auto bragg_sol = bragg::bragg_wavelength(cfg.grating, dispersion,
                                                   cfg.window_min_nm, cfg.window_max_nm);
    const double n_g =
        bragg::effective_group_index(cfg.grating, dispersion, bragg_sol.lambda0_nm);

    bragg::DesignTarget target = cfg.design;
    target.center_nm = bragg_sol.lambda0_nm;
    const auto section = bragg::solve_section(
        target, n_g, {cfg.design_kappa_min_per_nm, cfg.design_kappa_max_per_nm},
        cfg.grating);
    auto opts = make_mc_options(cfg, {}, bragg_sol.lambda0_nm);
    const auto design =
        bragg::solve_count(target, section, cfg.noise, cfg.trials, dispersion,
                           opts, cfg.design_max_sections, cfg.link_length_nm);

    json out;
    out["section"] = {{"period_nm", design.section.period_nm},
                      {"duty_cycle", design.section.duty_cycle},
                      {"length_nm", design.section.length_nm},
                      {"kappa_per_nm", design.section.kappa_per_nm},
                      {"bragg_order", design.section.bragg_order},
                      {"mode_pair", design.section.mode_pair == bragg::ModePair::Hybrid
                                        ? "hybrid"
                                        : "fundamental"}};
    out["section_count"] = design.section_count;
    out["noiseless_rejection_db"] = design.noiseless_rejection_db;
    out["mc_median_rejection_db"] = design.mc_median_rejection_db;
    out["mc_p25_rejection_db"] = design.mc_p25_rejection_db;
    out["predicted_bandwidth_nm"] = design.predicted_bandwidth_nm;
    write_json(dir / "design.json", out);
    write_json(dir / "effective_config.json", cfg.to_effective_json());
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_analyze(const CliOverrides& cli, const std::string& csv_path) {
    const auto spectrum = bragg::read_spectrum_csv(csv_path);
    // Off-band reference: outer tenth of the grid on each side.
    const double lo = spectrum.wavelengths_nm.front();
    const double hi = spectrum.wavelengths_nm.back();
    const double span = hi - lo;
    const std::vector<bragg::Band> offband = {{lo, lo + 0.1 * span},
                                              {hi - 0.1 * span, hi}};
    const json metrics = spectrum_metrics(spectrum, offband);
    if (!cli.out_dir.empty()) {
        bragg::RunConfig cfg;
        cfg.output_dir = cli.out_dir;
        write_json(ensure_out_dir(cfg) / "metrics.json", metrics);
    }
    std::cout << metrics.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-stage waveguide Bragg notch filter simulator"};
    app.require_subcommand(1);

    CliOverrides cli;
    std::string analyze_csv;

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", cli.config_path, "JSON run configuration");
        if (needs_config)
            opt->check(CLI::ExistingFile);
        sub->add_option("--seed", cli.seed, "Override the noise seed");
        sub->add_option("--out", cli.out_dir, "Output directory");
        sub->add_option("--trials", cli.trials, "Override the trial count");
        sub->add_option("--grid-step", cli.grid_step_nm, "Override the grid step (nm)");
    };

    auto* modes = app.add_subcommand("modes", "Report effective indices and the Bragg resonance");
    add_common(modes, false);
    auto* simulate = app.add_subcommand("simulate", "Single-realization cascade spectrum");
    add_common(simulate, false);
    auto* montecarlo = app.add_subcommand("montecarlo", "Noise ensemble statistics");
    add_common(montecarlo, false);
    auto* design = app.add_subcommand("design", "Invert targets into a cascade design");
    add_common(design, false);
    auto* analyze = app.add_subcommand("analyze", "Metrics for an existing spectrum CSV");
    analyze->add_option("csv", analyze_csv, "Spectrum CSV path")->required();
    add_common(analyze, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (modes->parsed())
            return cmd_modes(cli);
        if (simulate->parsed())
            return cmd_simulate(cli);
        if (montecarlo->parsed())
            return cmd_montecarlo(cli);
        if (design->parsed())
            return cmd_design(cli);
        if (analyze->parsed())
            return cmd_analyze(cli, analyze_csv);
    } catch (const bragg::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bragg::InfeasibleTarget& e) {
        std::cout << nlohmann::json{{"error", e.what()}}.dump(2) << "\n";
        return 3;
    } catch (const bragg::CalibrationFailed& e) {
        std::cout << nlohmann::json{{"error", e.what()}}.dump(2) << "\n";
        return 3;
    } catch (const bragg::NoResonanceInWindow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
