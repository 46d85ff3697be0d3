#include "braggcascade/config.hpp"

#include <fstream>
#include <set>

namespace bragg {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown field: " + path + it.key());
    }
}

double get_num(const json& obj, const std::string& path, const std::string& key,
               double fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_number())
        throw ConfigError("expected a number at " + path + key);
    return obj[key].get<double>();
}

std::int64_t get_int(const json& obj, const std::string& path,
                     const std::string& key, std::int64_t fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_number_integer())
        throw ConfigError("expected an integer at " + path + key);
    return obj[key].get<std::int64_t>();
}

std::string get_str(const json& obj, const std::string& path,
                    const std::string& key, const std::string& fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj[key].is_string())
        throw ConfigError("expected a string at " + path + key);
    return obj[key].get<std::string>();
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw ConfigError("config is not valid JSON: " + path);
    return from_json(doc);
}

RunConfig RunConfig::from_json(const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config root must be an object");
    RunConfig c;

    reject_unknown(doc, "", {"geometry", "dispersion", "grating", "cascade",
                             "noise", "measurement", "grid", "window_min_nm",
                             "window_max_nm", "segment_length_nm", "trials",
                             "threads", "output_dir", "design", "seed"});

    if (doc.contains("geometry")) {
        const auto& g = doc["geometry"];
        reject_unknown(g, "geometry.",
                       {"core_thickness_nm", "core_width_nm", "n_core", "n_top",
                        "n_bottom", "n_side"});
        c.geometry.core_thickness_nm =
            get_num(g, "geometry.", "core_thickness_nm", c.geometry.core_thickness_nm);
        c.geometry.core_width_nm =
            get_num(g, "geometry.", "core_width_nm", c.geometry.core_width_nm);
        c.geometry.n_core = get_num(g, "geometry.", "n_core", c.geometry.n_core);
        c.geometry.n_top = get_num(g, "geometry.", "n_top", c.geometry.n_top);
        c.geometry.n_bottom = get_num(g, "geometry.", "n_bottom", c.geometry.n_bottom);
        c.geometry.n_side = get_num(g, "geometry.", "n_side", c.geometry.n_side);
    }

    if (doc.contains("dispersion")) {
        const auto& d = doc["dispersion"];
        reject_unknown(d, "dispersion.",
                       {"kind", "indices", "wavelengths_nm", "indices_by_order",
                        "tabulate_step_nm"});
        c.dispersion_kind = get_str(d, "dispersion.", "kind", c.dispersion_kind);
        if (c.dispersion_kind != "geometry" && c.dispersion_kind != "constant" &&
            c.dispersion_kind != "table")
            throw ConfigError("dispersion.kind must be geometry, constant or table");
        if (d.contains("indices"))
            c.constant_indices = d["indices"].get<std::vector<double>>();
        if (d.contains("wavelengths_nm"))
            c.table_wavelengths_nm = d["wavelengths_nm"].get<std::vector<double>>();
        if (d.contains("indices_by_order"))
            c.table_indices =
                d["indices_by_order"].get<std::vector<std::vector<double>>>();
        c.tabulate_step_nm =
            get_num(d, "dispersion.", "tabulate_step_nm", c.tabulate_step_nm);
    }

    if (doc.contains("grating")) {
        const auto& g = doc["grating"];
        reject_unknown(g, "grating.",
                       {"period_nm", "duty_cycle", "length_nm", "kappa_per_nm",
                        "bragg_order", "mode_pair", "avg_width_nm",
                        "corrugation_nm"});
        c.grating.period_nm = get_num(g, "grating.", "period_nm", c.grating.period_nm);
        c.grating.duty_cycle = get_num(g, "grating.", "duty_cycle", c.grating.duty_cycle);
        c.grating.length_nm = get_num(g, "grating.", "length_nm", c.grating.length_nm);
        c.grating.kappa_per_nm =
            get_num(g, "grating.", "kappa_per_nm", c.grating.kappa_per_nm);
        c.grating.bragg_order = static_cast<int>(
            get_int(g, "grating.", "bragg_order", c.grating.bragg_order));
        const std::string pair = get_str(g, "grating.", "mode_pair", "hybrid");
        if (pair == "hybrid")
            c.grating.mode_pair = ModePair::Hybrid;
        else if (pair == "fundamental")
            c.grating.mode_pair = ModePair::Fundamental;
        else
            throw ConfigError("grating.mode_pair must be hybrid or fundamental");
        c.grating.avg_width_nm =
            get_num(g, "grating.", "avg_width_nm", c.grating.avg_width_nm);
        c.grating.corrugation_nm =
            get_num(g, "grating.", "corrugation_nm", c.grating.corrugation_nm);
    }

    if (doc.contains("cascade")) {
        const auto& k = doc["cascade"];
        reject_unknown(k, "cascade.",
                       {"sections", "link_length_nm", "composition", "link_index",
                        "link_loss_db", "link_te1_leakage"});
        c.section_count =
            static_cast<int>(get_int(k, "cascade.", "sections", c.section_count));
        c.link_length_nm =
            get_num(k, "cascade.", "link_length_nm", c.link_length_nm);
        const std::string comp = get_str(k, "cascade.", "composition", "incoherent");
        if (comp == "incoherent")
            c.composition = Composition::Incoherent;
        else if (comp == "coherent")
            c.composition = Composition::Coherent;
        else
            throw ConfigError("cascade.composition must be coherent or incoherent");
        c.link_index = get_num(k, "cascade.", "link_index", c.link_index);
        c.link_loss_db = get_num(k, "cascade.", "link_loss_db", c.link_loss_db);
        c.link_te1_leakage =
            get_num(k, "cascade.", "link_te1_leakage", c.link_te1_leakage);
    }

    if (doc.contains("noise")) {
        const auto& n = doc["noise"];
        reject_unknown(n, "noise.",
                       {"sigma_width_nm", "correlation_length_nm",
                        "wafer_bias_sigma_nm", "seed", "calibrate"});
        c.noise.sigma_width_nm =
            get_num(n, "noise.", "sigma_width_nm", c.noise.sigma_width_nm);
        c.noise.correlation_length_nm =
            get_num(n, "noise.", "correlation_length_nm", c.noise.correlation_length_nm);
        c.noise.wafer_bias_sigma_nm =
            get_num(n, "noise.", "wafer_bias_sigma_nm", c.noise.wafer_bias_sigma_nm);
        c.noise.seed = static_cast<std::uint64_t>(
            get_int(n, "noise.", "seed", static_cast<std::int64_t>(c.noise.seed)));
        if (n.contains("calibrate")) {
            const auto& cal = n["calibrate"];
            reject_unknown(cal, "noise.calibrate.", {"target_db", "onset_nm"});
            CalibrationRequest req;
            req.target_db = get_num(cal, "noise.calibrate.", "target_db", req.target_db);
            req.onset_nm = get_num(cal, "noise.calibrate.", "onset_nm", req.onset_nm);
            c.calibrate = req;
        }
    }

    if (doc.contains("measurement")) {
        const auto& m = doc["measurement"];
        reject_unknown(m, "measurement.",
                       {"source_power_dbm", "coupling_loss_db",
                        "detector_floor_dbm", "enabled"});
        c.measurement.source_power_dbm =
            get_num(m, "measurement.", "source_power_dbm", c.measurement.source_power_dbm);
        c.measurement.coupling_loss_db =
            get_num(m, "measurement.", "coupling_loss_db", c.measurement.coupling_loss_db);
        c.measurement.detector_floor_dbm = get_num(
            m, "measurement.", "detector_floor_dbm", c.measurement.detector_floor_dbm);
        if (m.contains("enabled")) {
            if (!m["enabled"].is_boolean())
                throw ConfigError("expected a boolean at measurement.enabled");
            c.measurement_enabled = m["enabled"].get<bool>();
        } else {
            c.measurement_enabled = true;
        }
    }

    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        reject_unknown(g, "grid.", {"min_nm", "max_nm", "step_nm"});
        GridConfig gc;
        gc.min_nm = get_num(g, "grid.", "min_nm", 0.0);
        gc.max_nm = get_num(g, "grid.", "max_nm", 0.0);
        gc.step_nm = get_num(g, "grid.", "step_nm", 0.01);
        c.grid = gc;
    }

    c.window_min_nm = get_num(doc, "", "window_min_nm", c.window_min_nm);
    c.window_max_nm = get_num(doc, "", "window_max_nm", c.window_max_nm);
    c.segment_length_nm = get_num(doc, "", "segment_length_nm", c.segment_length_nm);
    c.trials = static_cast<int>(get_int(doc, "", "trials", c.trials));
    c.threads = static_cast<int>(get_int(doc, "", "threads", c.threads));
    c.output_dir = get_str(doc, "", "output_dir", c.output_dir);
    if (doc.contains("seed"))
        c.noise.seed = static_cast<std::uint64_t>(get_int(doc, "", "seed", 0));

    if (doc.contains("design")) {
        const auto& d = doc["design"];
        reject_unknown(d, "design.",
                       {"min_rejection_db", "bandwidth_nm", "bandwidth_tolerance",
                        "center_nm", "max_total_length_nm", "kappa_min_per_nm",
                        "kappa_max_per_nm", "max_sections"});
        c.design.min_rejection_db =
            get_num(d, "design.", "min_rejection_db", c.design.min_rejection_db);
        c.design.bandwidth_nm =
            get_num(d, "design.", "bandwidth_nm", c.design.bandwidth_nm);
        c.design.bandwidth_tolerance =
            get_num(d, "design.", "bandwidth_tolerance", c.design.bandwidth_tolerance);
        c.design.center_nm = get_num(d, "design.", "center_nm", c.design.center_nm);
        c.design.max_total_length_nm = get_num(d, "design.", "max_total_length_nm",
                                               c.design.max_total_length_nm);
        c.design_kappa_min_per_nm =
            get_num(d, "design.", "kappa_min_per_nm", c.design_kappa_min_per_nm);
        c.design_kappa_max_per_nm =
            get_num(d, "design.", "kappa_max_per_nm", c.design_kappa_max_per_nm);
        c.design_max_sections = static_cast<int>(
            get_int(d, "design.", "max_sections", c.design_max_sections));
    }

    c.validate();
    return c;
}

void RunConfig::validate() const {
    geometry.validate();
    grating.validate();
    noise.validate();
    measurement.validate();
    if (section_count < 1)
        throw ConfigError("cascade.sections must be >= 1");
    if (trials < 1)
        throw ConfigError("trials must be >= 1");
    if (threads < 1)
        throw ConfigError("threads must be >= 1");
    if (!(segment_length_nm > 0.0))
        throw ConfigError("segment_length_nm must be positive");
    if (!(window_max_nm > window_min_nm))
        throw ConfigError("wavelength window is empty");
    if (grid && (!(grid->max_nm > grid->min_nm) || !(grid->step_nm > 0.0)))
        throw ConfigError("grid must satisfy min < max and step > 0");
    if (dispersion_kind == "constant" && constant_indices.empty())
        throw ConfigError("dispersion.indices required for constant dispersion");
    if (dispersion_kind == "table" &&
        (table_wavelengths_nm.empty() || table_indices.empty()))
        throw ConfigError(
            "dispersion.wavelengths_nm and dispersion.indices_by_order required "
            "for table dispersion");
}

nlohmann::json RunConfig::to_effective_json() const {
    json doc;
    doc["geometry"] = {{"core_thickness_nm", geometry.core_thickness_nm},
                       {"core_width_nm", geometry.core_width_nm},
                       {"n_core", geometry.n_core},
                       {"n_top", geometry.n_top},
                       {"n_bottom", geometry.n_bottom},
                       {"n_side", geometry.n_side}};
    json disp = {{"kind", dispersion_kind}, {"tabulate_step_nm", tabulate_step_nm}};
    if (dispersion_kind == "constant")
        disp["indices"] = constant_indices;
    if (dispersion_kind == "table") {
        disp["wavelengths_nm"] = table_wavelengths_nm;
        disp["indices_by_order"] = table_indices;
    }
    doc["dispersion"] = disp;
    doc["grating"] = {
        {"period_nm", grating.period_nm},
        {"duty_cycle", grating.duty_cycle},
        {"length_nm", grating.length_nm},
        {"kappa_per_nm", grating.kappa_per_nm},
        {"bragg_order", grating.bragg_order},
        {"mode_pair", grating.mode_pair == ModePair::Hybrid ? "hybrid" : "fundamental"},
        {"avg_width_nm", grating.avg_width_nm},
        {"corrugation_nm", grating.corrugation_nm}};
    doc["cascade"] = {{"sections", section_count},
                      {"link_length_nm", link_length_nm},
                      {"composition", composition == Composition::Coherent
                                          ? "coherent"
                                          : "incoherent"},
                      {"link_index", link_index},
                      {"link_loss_db", link_loss_db},
                      {"link_te1_leakage", link_te1_leakage}};
    json n = {{"sigma_width_nm", noise.sigma_width_nm},
              {"correlation_length_nm", noise.correlation_length_nm},
              {"wafer_bias_sigma_nm", noise.wafer_bias_sigma_nm},
              {"seed", noise.seed}};
    if (calibrate)
        n["calibrate"] = {{"target_db", calibrate->target_db},
                          {"onset_nm", calibrate->onset_nm}};
    doc["noise"] = n;
    doc["measurement"] = {{"source_power_dbm", measurement.source_power_dbm},
                          {"coupling_loss_db", measurement.coupling_loss_db},
                          {"detector_floor_dbm", measurement.detector_floor_dbm},
                          {"enabled", measurement_enabled}};
    if (grid)
        doc["grid"] = {{"min_nm", grid->min_nm},
                       {"max_nm", grid->max_nm},
                       {"step_nm", grid->step_nm}};
    doc["window_min_nm"] = window_min_nm;
    doc["window_max_nm"] = window_max_nm;
    doc["segment_length_nm"] = segment_length_nm;
    doc["trials"] = trials;
    doc["threads"] = threads;
    doc["output_dir"] = output_dir;
    doc["design"] = {{"min_rejection_db", design.min_rejection_db},
                     {"bandwidth_nm", design.bandwidth_nm},
                     {"bandwidth_tolerance", design.bandwidth_tolerance},
                     {"center_nm", design.center_nm},
                     {"max_total_length_nm", design.max_total_length_nm},
                     {"kappa_min_per_nm", design_kappa_min_per_nm},
                     {"kappa_max_per_nm", design_kappa_max_per_nm},
                     {"max_sections", design_max_sections}};
    return doc;
}

DispersionModel RunConfig::build_dispersion() const {
    if (dispersion_kind == "constant")
        return DispersionModel::constant(constant_indices);
    if (dispersion_kind == "table")
        return DispersionModel::table(table_wavelengths_nm, table_indices);
    // Sample the mode solver once over the window; TMM loops then interpolate.
    WaveguideGeometry g = geometry;
    g.core_width_nm = grating.avg_width_nm;
    const int max_order = grating.mode_pair == ModePair::Hybrid ? 1 : 0;
    return DispersionModel::from_geometry(g).tabulated(
        window_min_nm, window_max_nm, tabulate_step_nm, max_order);
}

CascadeSpec RunConfig::build_cascade() const {
    CascadeSpec cascade;
    cascade.sections.assign(static_cast<std::size_t>(section_count), grating);
    cascade.link_lengths_nm.assign(
        static_cast<std::size_t>(std::max(0, section_count - 1)), link_length_nm);
    cascade.composition = composition;
    cascade.link_index = link_index;
    cascade.link_loss_db = link_loss_db;
    cascade.link_te1_leakage = link_te1_leakage;
    cascade.validate();
    return cascade;
}

}  // namespace bragg
