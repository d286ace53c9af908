// rydmol: command-line front end for the Rydberg-molecule model and fits.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rydmol/config.hpp"
#include "rydmol/constants.hpp"
#include "rydmol/error.hpp"
#include "rydmol/io.hpp"
#include "rydmol/molecular_model.hpp"
#include "rydmol/parallel.hpp"
#include "rydmol/potential.hpp"
#include "rydmol/spectro.hpp"
#include "rydmol/vibrational.hpp"
#include "rydmol/wavefunction.hpp"

namespace {

using rydmol::InputError;
using rydmol::NumericalError;
using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

struct GlobalOptions {
    std::string config;
    std::string out;
    std::string format;
    std::string metadata;
    std::string n_list;
    std::optional<double> a_atom;
    int threads = 0;
};

struct LineSpec {
    std::string label;
    rydmol::FitWindow window;
};

struct CommandOptions {
    bool cross_check = false;
    std::vector<std::string> data;
    std::string a_range;
    std::string spectrum;
    std::string atomic_window;
    std::vector<std::string> lines;
    std::optional<double> b0;
    std::optional<double> g_eff;
    std::string shape;
};

rydmol::RunConfig make_config(const GlobalOptions& g)
{
    rydmol::RunConfig cfg = g.config.empty() ? rydmol::RunConfig{} : rydmol::load_config(g.config);
    if (!g.n_list.empty()) {
        rydmol::apply_config_entry(cfg, "n_list", g.n_list);
    }
    if (g.a_atom) {
        cfg.a_atom = *g.a_atom;
    }
    if (!g.format.empty()) {
        rydmol::apply_config_entry(cfg, "format", g.format);
    }
    if (g.threads > 0) {
        cfg.model.threads = static_cast<unsigned>(g.threads);
    }
    if (!g.out.empty()) {
        cfg.output_dir = g.out;
    }
    return cfg;
}

Json config_json(const rydmol::RunConfig& cfg)
{
    Json j = Json::object();
    for (const auto& [k, v] : rydmol::config_echo(cfg)) {
        j[k] = v;
    }
    return j;
}

Json header(const std::string& command, const rydmol::RunConfig& cfg)
{
    Json report;
    report["command"] = command;
    report["program"] = std::string("rydmol ") + kVersion;
    report["constants_vintage"] = cfg.model.constants.vintage;
    report["config"] = config_json(cfg);
    return report;
}

Json opt_number(std::optional<double> x)
{
    return x ? Json(*x) : Json(nullptr);
}

std::string report_name(const std::string& command, const rydmol::RunConfig& cfg)
{
    return command + (cfg.format == "json" ? ".json" : ".txt");
}

// Results first, the configuration echo last.
std::string render(Json report, const rydmol::RunConfig& cfg)
{
    if (report.contains("config")) {
        Json echo = report["config"];
        report.erase("config");
        report["config"] = echo;
    }
    return cfg.format == "json" ? rydmol::render_json(report) : rydmol::render_table(report);
}

std::string out_path(const rydmol::RunConfig& cfg, const std::string& name)
{
    return (std::filesystem::path(cfg.output_dir.empty() ? "." : cfg.output_dir) / name).string();
}

// Report to stdout; with an output directory it is also the primary output file.
void emit_report(const std::string& command, const Json& report, const rydmol::RunConfig& cfg,
                 rydmol::OutputSet& outputs)
{
    const std::string text = render(report, cfg);
    if (!cfg.output_dir.empty()) {
        outputs.add(out_path(cfg, report_name(command, cfg)), text);
    }
    outputs.commit();
    std::cout << text;
}

Json level_json(const rydmol::VibrationalLevel& level, const std::string& role)
{
    Json j;
    j["index"] = static_cast<long long>(level.index);
    j["outer_well"] = role;
    j["e_mhz"] = level.energy_mhz;
    j["r_expect_bohr"] = level.r_expect;
    j["b_rot_khz"] = level.b_rot_mhz * 1e3;
    j["nodes"] = level.nodes;
    j["span_lo_bohr"] = level.span_lo;
    j["span_hi_bohr"] = level.span_hi;
    return j;
}

std::pair<double, double> parse_range(const std::string& what, const std::string& text)
{
    const auto sep = text.find_first_of(",:");
    if (sep == std::string::npos) {
        throw InputError(what + ": expected LO,HI, got '" + text + "'");
    }
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, sep);
        const std::string b = text.substr(sep + 1);
        const double lo = std::stod(a, &used);
        if (used != a.size()) {
            throw std::invalid_argument(a);
        }
        const double hi = std::stod(b, &used);
        if (used != b.size()) {
            throw std::invalid_argument(b);
        }
        if (!(hi > lo)) {
            throw InputError(what + ": need LO < HI, got '" + text + "'");
        }
        return {lo, hi};
    }
    catch (const std::logic_error&) {
        throw InputError(what + ": expected LO,HI, got '" + text + "'");
    }
}

LineSpec parse_line_spec(const std::string& text)
{
    const auto sep = text.find(':');
    if (sep == std::string::npos || sep == 0) {
        throw InputError("--line: expected LABEL:LO:HI, got '" + text + "'");
    }
    const auto [lo, hi] = parse_range("--line " + text.substr(0, sep), text.substr(sep + 1));
    return {text.substr(0, sep), {lo, hi}};
}

std::optional<int> label_to_v(const std::string& label)
{
    if (label == "v0" || label == "0") {
        return 0;
    }
    if (label == "v1" || label == "1") {
        return 1;
    }
    return std::nullopt;
}

Json line_json(const rydmol::LineFit& f)
{
    Json j;
    j["center_mhz"] = f.center;
    j["sigma_center_mhz"] = f.sigma_center;
    j["fwhm_mhz"] = f.width;
    j["sigma_fwhm_mhz"] = f.sigma_width;
    j["amplitude"] = f.amplitude;
    j["sigma_amplitude"] = f.sigma_amplitude;
    j["baseline"] = f.baseline;
    j["chi2"] = f.chi2;
    j["iterations"] = f.iterations;
    return j;
}

// ---- subcommands -----------------------------------------------------------

int cmd_wavefunction(const rydmol::RunConfig& cfg)
{
    const auto& m = cfg.model;
    std::vector<std::optional<rydmol::RadialWavefunction>> wfs(cfg.n_list.size());
    rydmol::parallel_for(cfg.n_list.size(), m.threads, [&](std::size_t i) {
        try {
            wfs[i].emplace(rydmol::compute_wavefunction(cfg.n_list[i], 0, m.defects, m.grid));
        }
        catch (const InputError& e) {
            throw InputError("n = " + std::to_string(cfg.n_list[i]) + ": " + e.what());
        }
        catch (const NumericalError& e) {
            throw NumericalError("n = " + std::to_string(cfg.n_list[i]) + ": " + e.what());
        }
    });
    rydmol::OutputSet outputs;
    Json report = header("wavefunction", cfg);
    Json rows = Json::array();
    for (const auto& wf : wfs) {
        const std::string name = "wavefunction_n" + std::to_string(wf->state().n) + ".csv";
        outputs.add(out_path(cfg, name), rydmol::wavefunction_table(*wf));
        Json row;
        row["n"] = wf->state().n;
        row["n_star"] = wf->state().n_star;
        row["energy_hartree"] = wf->state().energy;
        row["nodes"] = wf->nodes();
        row["truncation_radius_bohr"] = wf->truncation_radius();
        row["outer_antinode_bohr"] = rydmol::outermost_antinode(*wf);
        row["norm"] = wf->norm();
        row["file"] = name;
        rows.push_back(row);
    }
    report["states"] = rows;
    outputs.commit();
    std::cout << render(report, cfg);
    return 0;
}

int cmd_potential(const rydmol::RunConfig& cfg)
{
    const rydmol::ModelSettings settings = cfg.model_settings();
    const rydmol::BindingEnergyModel model(settings, cfg.n_list);
    rydmol::OutputSet outputs;
    Json report = header("potential", cfg);
    Json rows = Json::array();
    for (int n : model.n_values()) {
        const rydmol::PotentialCurve curve = model.potential(n, cfg.a_atom);
        const std::string name = "potential_n" + std::to_string(n) + ".csv";
        outputs.add(out_path(cfg, name), rydmol::potential_table(curve, settings.constants));
        const auto it = std::min_element(curve.v.begin(), curve.v.end());
        const rydmol::ScatteringModel sm{cfg.a_atom, settings.alpha, {}};
        Json row;
        row["n"] = n;
        row["n_star"] = curve.meta.n_star;
        row["v_min_mhz"] = rydmol::energy_au_to_mhz(*it, settings.constants);
        row["r_at_v_min_bohr"] = curve.r[static_cast<std::size_t>(it - curve.v.begin())];
        row["a_zero_crossing_bohr"] = opt_number(rydmol::scattering_zero_radius(sm, curve.meta.momentum_n));
        row["validity_ratio"] = rydmol::validity_check(curve.meta.n_star, settings.alpha).ratio;
        row["file"] = name;
        rows.push_back(row);
    }
    report["curves"] = rows;
    outputs.commit();
    std::cout << render(report, cfg);
    return 0;
}

int cmd_boundstates(const rydmol::RunConfig& cfg, bool cross_check)
{
    const rydmol::ModelSettings settings = cfg.model_settings();
    const rydmol::BindingEnergyModel model(settings, cfg.n_list);
    const auto window = cfg.e_window_au();
    struct Result {
        rydmol::PotentialCurve curve;
        std::vector<rydmol::VibrationalLevel> levels;
        std::optional<rydmol::OuterWellLevels> selection;
        std::vector<double> shooting;
    };
    std::vector<Result> results(model.n_values().size());
    rydmol::parallel_for(results.size(), settings.threads, [&](std::size_t i) {
        const int n = model.n_values()[i];
        try {
            Result& r = results[i];
            r.curve = model.potential(n, cfg.a_atom);
            r.levels = rydmol::solve_bound_states(r.curve, settings.reduced_mass(), window, settings.solver,
                                                  settings.constants);
            if (!r.levels.empty()) {
                r.selection = rydmol::select_outer_well_levels(r.levels, r.curve, settings.selection);
            }
            if (cross_check && !r.levels.empty()) {
                const double lo = window ? std::max(window->lo, r.curve.min_value()) : r.curve.min_value();
                const double hi = window ? window->hi : 0.0;
                r.shooting = rydmol::shoot_eigenvalues(r.curve, settings.reduced_mass(), {lo, hi},
                                                       r.levels.size());
            }
        }
        catch (const InputError& e) {
            throw InputError("n = " + std::to_string(n) + ": " + e.what());
        }
        catch (const NumericalError& e) {
            throw NumericalError("n = " + std::to_string(n) + ": " + e.what());
        }
    });

    Json report = header("boundstates", cfg);
    Json states = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const Result& r = results[i];
        Json s;
        s["n"] = model.n_values()[i];
        s["levels_found"] = static_cast<long long>(r.levels.size());
        int outer = 0;
        Json levels = Json::array();
        for (std::size_t k = 0; k < r.levels.size(); ++k) {
            const auto& level = r.levels[k];
            std::string role = "-";
            if (r.selection && r.selection->v0 && r.selection->v0->index == level.index) {
                role = "v0";
            }
            else if (r.selection && r.selection->v1 && r.selection->v1->index == level.index) {
                role = "v1";
            }
            outer += role != "-";
            Json lj = level_json(level, role);
            if (cross_check) {
                const double e_shoot = k < r.shooting.size() ? r.shooting[k] : std::nan("");
                lj["shooting_e_mhz"] = rydmol::energy_au_to_mhz(e_shoot, settings.constants);
                lj["relative_difference"] = std::abs(e_shoot - level.energy) / std::abs(level.energy);
            }
            levels.push_back(lj);
        }
        s["outer_well_levels"] = outer;
        s["outer_well_start_bohr"] = r.selection ? Json(r.selection->outer_lobe_start) : Json(nullptr);
        s["levels"] = levels;
        s["diagnostics"] = r.selection ? r.selection->diagnostics : std::string("no bound states below threshold");
        states.push_back(s);
    }
    report["states"] = states;
    rydmol::OutputSet outputs;
    emit_report("boundstates", report, cfg, outputs);
    return 0;
}

int cmd_model_curve(const rydmol::RunConfig& cfg)
{
    const rydmol::ModelSettings settings = cfg.model_settings();
    const rydmol::BindingEnergyModel model(settings, cfg.n_list);
    const auto energies = model.evaluate_all(cfg.a_atom);
    Json report = header("model-curve", cfg);
    Json rows = Json::array();
    for (const auto& e : energies) {
        Json row;
        row["n"] = e.n;
        row["e_v0_mhz"] = opt_number(e.e_mhz(0));
        row["e_v1_mhz"] = opt_number(e.e_mhz(1));
        row["r_v0_bohr"] = e.v0 ? Json(e.v0->r_expect) : Json(nullptr);
        row["r_v1_bohr"] = e.v1 ? Json(e.v1->r_expect) : Json(nullptr);
        row["b_rot_v0_khz"] = e.v0 ? Json(e.v0->b_rot_mhz * 1e3) : Json(nullptr);
        row["levels_found"] = static_cast<long long>(e.levels_found);
        rows.push_back(row);
    }
    report["curve"] = rows;
    rydmol::OutputSet outputs;
    emit_report("model-curve", report, cfg, outputs);
    return 0;
}

int cmd_fit_scattering_length(rydmol::RunConfig cfg, const CommandOptions& opt)
{
    if (!opt.a_range.empty()) {
        std::tie(cfg.fit.a_lo, cfg.fit.a_hi) = parse_range("--a-range", opt.a_range);
    }
    std::vector<std::string> files = cfg.inputs;
    files.insert(files.end(), opt.data.begin(), opt.data.end());
    cfg.inputs = files;
    cfg.validate();
    if (files.empty()) {
        throw InputError("fit-scattering-length: no data files (use --data or 'input =' in the config)");
    }
    const auto data = rydmol::parse_binding_energy_files(files);
    const rydmol::ModelSettings settings = cfg.model_settings();
    const rydmol::ScatteringLengthFit fit = rydmol::fit_scattering_length(data, settings, cfg.fit);

    Json report = header("fit-scattering-length", cfg);
    report["inputs"] = files;
    Json result;
    result["a_best_bohr"] = fit.a_best;
    result["a_interval_lo_bohr"] = fit.a_lo;
    result["a_interval_hi_bohr"] = fit.a_hi;
    result["interval_clipped"] = fit.interval_clipped;
    result["chi2"] = fit.chi2;
    result["data_used"] = static_cast<long long>(fit.data_used);
    result["degrees_of_freedom"] = static_cast<long long>(fit.data_used) - 1;
    result["unimodal"] = fit.unimodal;
    result["warnings"] = fit.warnings;
    report["fit"] = result;
    Json rows = Json::array();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& d = data[i];
        Json row;
        row["n"] = d.n;
        row["v"] = d.v ? std::to_string(*d.v) : std::string("u");
        row["e_b_mhz"] = d.e_b;
        row["sigma_mhz"] = d.sigma;
        row["residual_mhz"] = opt_number(fit.residuals[i]);
        row["non_molecular"] = d.non_molecular;
        rows.push_back(row);
    }
    report["data"] = rows;
    Json scan = Json::array();
    for (const auto& [a, c] : fit.scan) {
        Json row;
        row["a_bohr"] = a;
        row["chi2"] = c;
        scan.push_back(row);
    }
    report["scan"] = scan;
    rydmol::OutputSet outputs;
    emit_report("fit-scattering-length", report, cfg, outputs);
    return 0;
}

int cmd_fit_stark(rydmol::RunConfig cfg, const CommandOptions& opt)
{
    std::vector<std::string> files = cfg.inputs;
    files.insert(files.end(), opt.data.begin(), opt.data.end());
    cfg.inputs = files;
    cfg.validate();
    if (files.empty()) {
        throw InputError("fit-stark: no data files (use --data)");
    }
    Json report = header("fit-stark", cfg);
    Json rows = Json::array();
    for (const auto& f : files) {
        const auto series = rydmol::parse_stark_csv(f);
        rydmol::PolarizabilityFit fit;
        try {
            fit = rydmol::fit_stark(series, cfg.model.constants);
        }
        catch (const InputError& e) {
            throw InputError(f + ": " + e.what());
        }
        Json row;
        row["file"] = f;
        row["points"] = static_cast<long long>(series.size());
        row["alpha_au"] = fit.alpha;
        row["sigma_alpha_au"] = fit.sigma;
        row["alpha_1e7_au"] = fit.alpha / 1e7;
        row["sigma_alpha_1e7_au"] = fit.sigma / 1e7;
        row["zero_field_center_mhz"] = fit.zero_field_center;
        row["sigma_zero_field_center_mhz"] = fit.sigma_zero_field_center;
        row["chi2"] = fit.chi2;
        row["weighted"] = fit.weighted;
        row["systematic_fraction"] = fit.systematic_fraction;
        rows.push_back(row);
    }
    report["fits"] = rows;
    report["note"] = "uncertainties are statistical; the field-calibration systematic is echoed, not included";
    rydmol::OutputSet outputs;
    emit_report("fit-stark", report, cfg, outputs);
    return 0;
}

int cmd_fit_lifetime(rydmol::RunConfig cfg, const CommandOptions& opt)
{
    std::vector<std::string> files = cfg.inputs;
    files.insert(files.end(), opt.data.begin(), opt.data.end());
    cfg.inputs = files;
    cfg.validate();
    if (files.empty()) {
        throw InputError("fit-lifetime: no data files (use --data)");
    }
    Json report = header("fit-lifetime", cfg);
    Json rows = Json::array();
    std::vector<rydmol::LifetimeFit> fits;
    for (const auto& f : files) {
        const auto decay = rydmol::parse_decay_csv(f);
        try {
            fits.push_back(rydmol::fit_lifetime(decay));
        }
        catch (const InputError& e) {
            throw InputError(f + ": " + e.what());
        }
        catch (const NumericalError& e) {
            throw NumericalError(f + ": " + e.what());
        }
        const auto& fit = fits.back();
        Json row;
        row["file"] = f;
        row["points"] = static_cast<long long>(decay.size());
        row["tau_us"] = fit.tau;
        row["sigma_tau_us"] = fit.sigma;
        row["amplitude"] = fit.amplitude;
        row["baseline"] = fit.baseline;
        row["chi2"] = fit.chi2;
        rows.push_back(row);
    }
    report["fits"] = rows;
    // The first file is the reference (for example the atomic state).
    Json ratios = Json::array();
    for (std::size_t i = 1; i < fits.size(); ++i) {
        const double ratio = fits[0].tau / fits[i].tau;
        Json row;
        row["numerator"] = files[0];
        row["denominator"] = files[i];
        row["ratio"] = ratio;
        row["sigma_ratio"] = ratio * std::hypot(fits[0].sigma / fits[0].tau, fits[i].sigma / fits[i].tau);
        ratios.push_back(row);
    }
    report["ratios"] = ratios;
    rydmol::OutputSet outputs;
    emit_report("fit-lifetime", report, cfg, outputs);
    return 0;
}

int cmd_analyze_spectrum(rydmol::RunConfig cfg, const CommandOptions& opt)
{
    if (opt.spectrum.empty()) {
        throw InputError("analyze-spectrum: --spectrum is required");
    }
    if (opt.atomic_window.empty()) {
        throw InputError("analyze-spectrum: --atomic-window is required");
    }
    if (opt.b0) {
        cfg.b0_gauss = *opt.b0;
    }
    if (opt.g_eff) {
        cfg.g_eff = *opt.g_eff;
    }
    if (!opt.shape.empty()) {
        rydmol::apply_config_entry(cfg, "line_shape", opt.shape);
    }
    cfg.inputs.push_back(opt.spectrum);
    cfg.validate();
    if (cfg.n_list.size() != 1) {
        throw InputError("analyze-spectrum: exactly one n is required (--n)");
    }
    const int n = cfg.n_list.front();
    const auto [alo, ahi] = parse_range("--atomic-window", opt.atomic_window);
    std::vector<LineSpec> lines;
    for (const auto& l : opt.lines) {
        lines.push_back(parse_line_spec(l));
    }

    rydmol::Spectrum spectrum = rydmol::parse_spectrum_csv(opt.spectrum);
    spectrum.meta.n = n;
    spectrum.meta.b0_gauss = cfg.b0_gauss;
    const auto& constants = cfg.model.constants;
    const double delta_b = rydmol::zeeman_correction(cfg.b0_gauss, cfg.g_eff, constants);
    const rydmol::LineFit atomic = rydmol::fit_line(spectrum, {alo, ahi}, cfg.line_shape);

    Json report = header("analyze-spectrum", cfg);
    report["spectrum"] = opt.spectrum;
    report["points"] = static_cast<long long>(spectrum.detuning.size());
    report["zeeman_correction_mhz"] = delta_b;
    report["atomic_line"] = line_json(atomic);
    Json rows = Json::array();
    std::vector<rydmol::BindingEnergyDatum> data;
    for (const auto& spec : lines) {
        const rydmol::LineFit mol = rydmol::fit_line(spectrum, spec.window, cfg.line_shape);
        const auto d = rydmol::binding_energy(atomic, mol, delta_b, n, label_to_v(spec.label));
        data.push_back(d);
        Json row;
        row["label"] = spec.label;
        row["v"] = d.v ? std::to_string(*d.v) : std::string("u");
        row["center_mhz"] = mol.center;
        row["sigma_center_mhz"] = mol.sigma_center;
        row["fwhm_mhz"] = mol.width;
        row["e_b_mhz"] = d.e_b;
        row["sigma_mhz"] = d.sigma;
        row["non_molecular"] = d.non_molecular;
        rows.push_back(row);
    }
    report["lines"] = rows;

    rydmol::OutputSet outputs;
    if (!cfg.output_dir.empty()) {
        outputs.add(out_path(cfg, "binding_energies_n" + std::to_string(n) + ".csv"),
                    rydmol::binding_energy_csv(data));
    }
    emit_report("analyze-spectrum", report, cfg, outputs);
    return 0;
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

void write_metadata(const std::string& path, const std::string& command, int argc, char** argv, int status)
{
    std::string text = "program = rydmol " + std::string(kVersion) + "\n";
    text += "command = " + command + "\n";
    text += "timestamp_utc = " + utc_timestamp() + "\n";
    text += "exit_code = " + std::to_string(status) + "\n";
    text += "argv =";
    for (int i = 0; i < argc; ++i) {
        text += std::string(" ") + argv[i];
    }
    text += "\n";
    rydmol::OutputSet meta;
    meta.add(path, text);
    meta.commit();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ultra-long-range Rydberg molecule binding energies and spectroscopic fits"};
    app.set_version_flag("--version", std::string("rydmol ") + kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    CommandOptions opt;
    app.add_option("--config", g.config, "Run configuration (key = value)")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"table", "json"}));
    app.add_option("--metadata", g.metadata, "Write a run-metadata file (timestamp, argv) here");
    app.add_option("--n", g.n_list, "Principal quantum numbers, e.g. 35 or 34-40");
    app.add_option("--a-atom", g.a_atom, "Zero-energy triplet scattering length (bohr)");
    app.add_option("--threads", g.threads, "Worker threads for per-n model evaluation")->check(CLI::PositiveNumber);

    auto* wf = app.add_subcommand("wavefunction", "Write u(r) and |Psi|^2 tables, one file per n");
    auto* pot = app.add_subcommand("potential", "Write mean-field potential tables V(R) in MHz, one file per n");
    auto* bs = app.add_subcommand("boundstates", "Vibrational levels and outer-well assignment per n");
    bs->add_flag("--cross-check", opt.cross_check, "Compare against Numerov shooting eigenvalues");
    auto* mc = app.add_subcommand("model-curve", "Model E_B(v=0,1) against n");
    auto* fs = app.add_subcommand("fit-scattering-length", "Fit a_atom to binding-energy data");
    fs->add_option("--data", opt.data, "Binding-energy CSV files (n,v,e_b_mhz,sigma_mhz)");
    fs->add_option("--a-range", opt.a_range, "Scan range LO,HI in bohr");
    auto* st = app.add_subcommand("fit-stark", "Fit polarisabilities to Stark-shift series");
    st->add_option("--data", opt.data, "Stark CSV files (field_v_per_cm,center_mhz[,sigma_mhz])");
    auto* lt = app.add_subcommand("fit-lifetime", "Fit exponential decays");
    lt->add_option("--data", opt.data, "Decay CSV files (delay_us,counts); the first is the ratio reference");
    auto* as = app.add_subcommand("analyze-spectrum", "Fit line centres and form binding energies");
    as->add_option("--spectrum", opt.spectrum, "Spectrum CSV (detuning_mhz,signal)");
    as->add_option("--atomic-window", opt.atomic_window, "Atomic line window LO,HI in MHz");
    as->add_option("--line", opt.lines, "Molecular line LABEL:LO:HI (LABEL v0, v1 or anything else = unassigned)");
    as->add_option("--b0", opt.b0, "Magnetic field B0 in gauss");
    as->add_option("--g-eff", opt.g_eff, "Effective g factor of the Zeeman correction");
    as->add_option("--shape", opt.shape, "Line shape")->check(CLI::IsMember({"gaussian", "lorentzian"}));

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    int status = 0;
    try {
        rydmol::RunConfig cfg = make_config(g);
        cfg.validate();
        if (wf->parsed()) {
            status = cmd_wavefunction(cfg);
        }
        else if (pot->parsed()) {
            status = cmd_potential(cfg);
        }
        else if (bs->parsed()) {
            status = cmd_boundstates(cfg, opt.cross_check);
        }
        else if (mc->parsed()) {
            status = cmd_model_curve(cfg);
        }
        else if (fs->parsed()) {
            status = cmd_fit_scattering_length(cfg, opt);
        }
        else if (st->parsed()) {
            status = cmd_fit_stark(cfg, opt);
        }
        else if (lt->parsed()) {
            status = cmd_fit_lifetime(cfg, opt);
        }
        else if (as->parsed()) {
            status = cmd_analyze_spectrum(cfg, opt);
        }
    }
    catch (const InputError& e) {
        std::cerr << "rydmol " << command << ": input error: " << e.what() << "\n";
        status = 1;
    }
    catch (const NumericalError& e) {
        std::cerr << "rydmol " << command << ": numerical error: " << e.what() << "\n";
        status = 2;
    }
    catch (const std::exception& e) {
        std::cerr << "rydmol " << command << ": error: " << e.what() << "\n";
        status = 2;
    }
    if (!g.metadata.empty()) {
        try {
            write_metadata(g.metadata, command, argc, argv, status);
        }
        catch (const std::exception& e) {
            std::cerr << "rydmol: cannot write metadata: " << e.what() << "\n";
            return status == 0 ? 1 : status;
        }
    }
    return status;
}
