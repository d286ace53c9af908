#include "rydmol/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rydmol/error.hpp"
#include "rydmol/io.hpp"

namespace rydmol {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value)
{
    const std::string v = trim(value);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) {
        throw InputError("config key '" + key + "': expected a finite number, got '" + v + "'");
    }
    return x;
}

int to_int(const std::string& key, const std::string& value)
{
    const double x = to_double(key, value);
    if (x != std::floor(x) || std::abs(x) > 1e9) {
        throw InputError("config key '" + key + "': expected an integer, got '" + trim(value) + "'");
    }
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& value)
{
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw InputError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::pair<double, double> to_pair(const std::string& key, const std::string& value)
{
    const auto comma = value.find(',');
    if (comma == std::string::npos) {
        throw InputError("config key '" + key + "': expected 'lo, hi'");
    }
    return {to_double(key, value.substr(0, comma)), to_double(key, value.substr(comma + 1))};
}

}  // namespace

std::vector<int> parse_n_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        const auto dash = item.find('-', 1);
        if (dash != std::string::npos) {
            const int lo = to_int("n_list", item.substr(0, dash));
            const int hi = to_int("n_list", item.substr(dash + 1));
            if (hi < lo) {
                throw InputError("config key 'n_list': empty range '" + item + "'");
            }
            for (int n = lo; n <= hi; ++n) {
                out.push_back(n);
            }
        }
        else {
            out.push_back(to_int("n_list", item));
        }
    }
    return out;
}

void apply_config_entry(RunConfig& c, const std::string& raw_key, const std::string& value)
{
    const std::string key = trim(raw_key);
    const std::string v = trim(value);
    auto& m = c.model;
    if (key == "n_list") {
        c.n_list = parse_n_list(v);
    }
    else if (key == "a_atom") {
        c.a_atom = to_double(key, v);
    }
    else if (key == "alpha") {
        m.alpha = to_double(key, v);
    }
    else if (key == "a_range") {
        std::tie(c.fit.a_lo, c.fit.a_hi) = to_pair(key, v);
    }
    else if (key == "scan_step") {
        c.fit.scan_step = to_double(key, v);
    }
    else if (key == "scan_tolerance") {
        c.fit.tolerance = to_double(key, v);
    }
    else if (key == "defect.delta0") {
        m.defects.delta0 = to_double(key, v);
    }
    else if (key == "defect.delta2") {
        m.defects.delta2 = to_double(key, v);
    }
    else if (key == "defect.delta4") {
        m.defects.delta4 = to_double(key, v);
    }
    else if (key == "defect.source") {
        m.defects.source = v;
    }
    else if (key == "mesh.step_x") {
        m.grid.step_x = to_double(key, v);
    }
    else if (key == "mesh.r_outer") {
        m.grid.r_outer = to_double(key, v);
    }
    else if (key == "mesh.r_floor") {
        m.grid.r_floor = to_double(key, v);
    }
    else if (key == "potential.r_min") {
        m.potential.r_min = to_double(key, v);
    }
    else if (key == "potential.momentum") {
        if (v == "effective") {
            m.potential.momentum = MomentumQuantumNumber::effective;
        }
        else if (v == "principal") {
            m.potential.momentum = MomentumQuantumNumber::principal;
        }
        else {
            throw InputError("config key 'potential.momentum': expected effective|principal, got '" + v + "'");
        }
    }
    else if (key == "solver.max_levels") {
        m.solver.max_levels = static_cast<std::size_t>(std::max(0, to_int(key, v)));
    }
    else if (key == "solver.refinement_check") {
        m.solver.refinement_check = to_bool(key, v);
    }
    else if (key == "solver.refinement_tolerance_mhz") {
        c.refinement_tolerance_mhz = to_double(key, v);
    }
    else if (key == "solver.tail_margin_bohr") {
        m.solver.min_tail_margin = to_double(key, v);
    }
    else if (key == "solver.e_window_mhz") {
        if (v == "auto") {
            c.e_window_mhz.reset();
        }
        else {
            const auto [lo, hi] = to_pair(key, v);
            c.e_window_mhz = EnergyWindow{lo, hi};
        }
    }
    else if (key == "selection.outer_lobe_fraction") {
        m.selection.outer_lobe_fraction = to_double(key, v);
    }
    else if (key == "selection.outer_region_lobes") {
        m.selection.outer_region_lobes = to_int(key, v);
    }
    else if (key == "selection.outer_region_fraction") {
        m.selection.outer_region_fraction = to_double(key, v);
    }
    else if (key == "validity_threshold") {
        m.validity_threshold = to_double(key, v);
    }
    else if (key == "mu") {
        m.mu = to_double(key, v);
    }
    else if (key == "threads") {
        m.threads = static_cast<unsigned>(std::max(1, to_int(key, v)));
    }
    else if (key == "B0_gauss") {
        c.b0_gauss = to_double(key, v);
    }
    else if (key == "g_eff") {
        c.g_eff = to_double(key, v);
    }
    else if (key == "line_shape") {
        if (v == "gaussian") {
            c.line_shape = LineShape::gaussian;
        }
        else if (v == "lorentzian") {
            c.line_shape = LineShape::lorentzian;
        }
        else {
            throw InputError("config key 'line_shape': expected gaussian|lorentzian, got '" + v + "'");
        }
    }
    else if (key == "format") {
        if (v != "table" && v != "json") {
            throw InputError("config key 'format': expected table|json, got '" + v + "'");
        }
        c.format = v;
    }
    else if (key == "input") {
        c.inputs.push_back(v);
    }
    else if (key == "output_dir") {
        c.output_dir = v;
    }
    else if (key == "const.hartree_to_mhz") {
        m.constants.hartree_to_mhz = to_double(key, v);
    }
    else if (key == "const.bohr_magneton_mhz_per_gauss") {
        m.constants.bohr_magneton_mhz_per_gauss = to_double(key, v);
    }
    else if (key == "const.amu_to_me") {
        m.constants.amu_to_me = to_double(key, v);
    }
    else if (key == "const.mass_rb87_amu") {
        m.constants.mass_rb87_amu = to_double(key, v);
    }
    else if (key == "const.field_au_to_v_per_cm") {
        m.constants.field_au_to_v_per_cm = to_double(key, v);
    }
    else if (key == "const.vintage") {
        m.constants.vintage = v;
    }
    else {
        throw InputError("unknown config key '" + key + "'");
    }
}

RunConfig parse_config(const std::string& text, RunConfig base)
{
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            apply_config_entry(base, line.substr(0, eq), line.substr(eq + 1));
        }
        catch (const InputError& e) {
            throw InputError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

void RunConfig::validate() const
{
    for (int n : n_list) {
        if (n < 20 || n > 80) {
            throw InputError("config key 'n_list': n = " + std::to_string(n) + " outside [20, 80]");
        }
    }
    if (!(model.grid.step_x > 0.0) || model.grid.r_outer < 0.0 || !(model.grid.r_floor > 0.0)) {
        throw InputError("config keys 'mesh.*': mesh parameters must be positive");
    }
    if (!(model.potential.r_min > 0.0)) {
        throw InputError("config key 'potential.r_min' must be positive");
    }
    if (!(model.alpha > 0.0)) {
        throw InputError("config key 'alpha' must be positive");
    }
    if (!(a_atom >= -100.0 && a_atom <= 100.0)) {
        throw InputError("config key 'a_atom' outside [-100, 100] bohr");
    }
    if (!(fit.a_hi > fit.a_lo) || !(fit.scan_step > 0.0) || !(fit.tolerance > 0.0)) {
        throw InputError("config keys 'a_range'/'scan_step'/'scan_tolerance': invalid scan settings");
    }
    if (e_window_mhz && !(e_window_mhz->hi > e_window_mhz->lo)) {
        throw InputError("config key 'solver.e_window_mhz': need lo < hi");
    }
    if (!(b0_gauss >= 0.0)) {
        throw InputError("config key 'B0_gauss' must be non-negative");
    }
    if (model.solver.max_levels == 0) {
        throw InputError("config key 'solver.max_levels' must be positive");
    }
    model.constants.validate();
    model.defects.validate();
    std::set<std::string> paths;
    for (const auto& p : inputs) {
        if (!paths.insert(p).second) {
            throw InputError("config key 'input': path '" + p + "' listed twice");
        }
    }
    if (!output_dir.empty() && paths.count(output_dir)) {
        throw InputError("config key 'output_dir' coincides with an input path");
    }
}

ModelSettings RunConfig::model_settings() const
{
    ModelSettings m = model;
    if (refinement_tolerance_mhz) {
        m.solver.refinement_tolerance = energy_mhz_to_au(*refinement_tolerance_mhz, m.constants);
    }
    return m;
}

std::optional<EnergyWindow> RunConfig::e_window_au() const
{
    if (!e_window_mhz) {
        return std::nullopt;
    }
    return EnergyWindow{energy_mhz_to_au(e_window_mhz->lo, model.constants),
                        energy_mhz_to_au(e_window_mhz->hi, model.constants)};
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c)
{
    const ModelSettings m = c.model_settings();
    std::string n_list;
    for (std::size_t i = 0; i < c.n_list.size(); ++i) {
        n_list += (i ? "," : "") + std::to_string(c.n_list[i]);
    }
    auto num = [](double x) { return format_number(x); };
    std::vector<std::pair<std::string, std::string>> out{
        {"n_list", n_list},
        {"a_atom", num(c.a_atom)},
        {"alpha", num(m.alpha)},
        {"a_range", num(c.fit.a_lo) + "," + num(c.fit.a_hi)},
        {"scan_step", num(c.fit.scan_step)},
        {"scan_tolerance", num(c.fit.tolerance)},
        {"defect.delta0", num(m.defects.delta0)},
        {"defect.delta2", num(m.defects.delta2)},
        {"defect.delta4", num(m.defects.delta4)},
        {"defect.source", m.defects.source},
        {"mesh.step_x", num(m.grid.step_x)},
        {"mesh.r_outer", num(m.grid.r_outer)},
        {"mesh.r_floor", num(m.grid.r_floor)},
        {"potential.r_min", num(m.potential.r_min)},
        {"potential.momentum", m.potential.momentum == MomentumQuantumNumber::effective ? "effective" : "principal"},
        {"solver.max_levels", std::to_string(m.solver.max_levels)},
        {"solver.refinement_check", m.solver.refinement_check ? "true" : "false"},
        {"solver.refinement_tolerance_mhz", num(energy_au_to_mhz(m.solver.refinement_tolerance, m.constants))},
        {"solver.tail_margin_bohr", num(m.solver.min_tail_margin)},
        {"solver.e_window_mhz", c.e_window_mhz ? num(c.e_window_mhz->lo) + "," + num(c.e_window_mhz->hi) : "auto"},
        {"selection.outer_lobe_fraction", num(m.selection.outer_lobe_fraction)},
        {"selection.outer_region_lobes", std::to_string(m.selection.outer_region_lobes)},
        {"selection.outer_region_fraction", num(m.selection.outer_region_fraction)},
        {"validity_threshold", num(m.validity_threshold)},
        {"mu", num(m.reduced_mass())},
        {"B0_gauss", num(c.b0_gauss)},
        {"g_eff", num(c.g_eff)},
        {"line_shape", c.line_shape == LineShape::gaussian ? "gaussian" : "lorentzian"},
        {"const.hartree_to_mhz", num(m.constants.hartree_to_mhz)},
        {"const.bohr_magneton_mhz_per_gauss", num(m.constants.bohr_magneton_mhz_per_gauss)},
        {"const.amu_to_me", num(m.constants.amu_to_me)},
        {"const.mass_rb87_amu", num(m.constants.mass_rb87_amu)},
        {"const.field_au_to_v_per_cm", num(m.constants.field_au_to_v_per_cm)},
        {"const.vintage", m.constants.vintage},
    };
    return out;
}

}  // namespace rydmol
