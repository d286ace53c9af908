#include "rydmol/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rydmol/error.hpp"

namespace rydmol {

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", x);
    return buf;
}

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

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

struct CsvRow {
    int line = 0;
    std::vector<std::string> cells;
};

// Header-checked CSV; '#' lines are comments. Throws with file and line number.
std::vector<CsvRow> read_csv(const std::string& path, const std::vector<std::string>& header,
                             std::size_t optional_columns = 0)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError(path + ": cannot open file");
    }
    std::vector<CsvRow> rows;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        auto cells = split(t);
        if (!have_header) {
            const std::size_t required = header.size() - optional_columns;
            bool ok = cells.size() >= required && cells.size() <= header.size();
            for (std::size_t i = 0; ok && i < cells.size(); ++i) {
                ok = cells[i] == header[i];
            }
            if (!ok) {
                std::string expected;
                for (std::size_t i = 0; i < header.size(); ++i) {
                    expected += (i ? "," : "") + header[i];
                }
                throw InputError(path + ":" + std::to_string(line_no) + ": expected header '" + expected + "'");
            }
            columns = cells.size();
            have_header = true;
            continue;
        }
        if (cells.size() != columns) {
            throw InputError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                             " columns, found " + std::to_string(cells.size()));
        }
        rows.push_back({line_no, std::move(cells)});
    }
    if (!have_header) {
        throw InputError(path + ": missing header");
    }
    return rows;
}

double cell_number(const std::string& path, const CsvRow& row, std::size_t col)
{
    const std::string& s = row.cells[col];
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(x)) {
        throw InputError(path + ":" + std::to_string(row.line) + ": row " + std::to_string(row.line) +
                         " has non-numeric or non-finite cell '" + s + "'");
    }
    return x;
}

}  // namespace

Spectrum parse_spectrum_csv(const std::string& path)
{
    const auto rows = read_csv(path, {"detuning_mhz", "signal"});
    Spectrum s;
    for (const auto& row : rows) {
        const double d = cell_number(path, row, 0);
        if (!s.detuning.empty() && !(d > s.detuning.back())) {
            throw InputError(path + ":" + std::to_string(row.line) + ": detuning not strictly increasing at row " +
                             std::to_string(row.line));
        }
        s.detuning.push_back(d);
        s.signal.push_back(cell_number(path, row, 1));
    }
    if (s.detuning.size() < 8) {
        throw InputError(path + ": spectrum has " + std::to_string(s.detuning.size()) + " points (need >= 8)");
    }
    return s;
}

std::vector<BindingEnergyDatum> parse_binding_energy_csv(const std::string& path)
{
    const auto rows = read_csv(path, {"n", "v", "e_b_mhz", "sigma_mhz"});
    std::vector<BindingEnergyDatum> out;
    for (const auto& row : rows) {
        BindingEnergyDatum d;
        const double n = cell_number(path, row, 0);
        if (n != std::floor(n) || n < 1) {
            throw InputError(path + ":" + std::to_string(row.line) + ": n must be a positive integer");
        }
        d.n = static_cast<int>(n);
        const std::string& v = row.cells[1];
        if (v == "0" || v == "1") {
            d.v = v == "0" ? 0 : 1;
        }
        else if (v != "u" && v != "unassigned") {
            throw InputError(path + ":" + std::to_string(row.line) + ": v must be 0, 1 or u");
        }
        d.e_b = cell_number(path, row, 2);
        d.sigma = cell_number(path, row, 3);
        if (!(d.sigma > 0.0)) {
            throw InputError(path + ":" + std::to_string(row.line) + ": sigma_mhz must be positive");
        }
        d.non_molecular = !(d.e_b < 0.0);
        out.push_back(d);
    }
    return out;
}

std::vector<BindingEnergyDatum> parse_binding_energy_files(const std::vector<std::string>& paths)
{
    std::vector<BindingEnergyDatum> out;
    std::string errors;
    for (const auto& p : paths) {
        try {
            auto part = parse_binding_energy_csv(p);
            out.insert(out.end(), part.begin(), part.end());
        }
        catch (const InputError& e) {
            errors += (errors.empty() ? "" : "\n") + std::string(e.what());
        }
    }
    if (!errors.empty()) {
        throw InputError(errors);
    }
    return out;
}

std::vector<StarkPoint> parse_stark_csv(const std::string& path)
{
    const auto rows = read_csv(path, {"field_v_per_cm", "center_mhz", "sigma_mhz"}, 1);
    std::vector<StarkPoint> out;
    for (const auto& row : rows) {
        StarkPoint p;
        p.field = cell_number(path, row, 0);
        p.center = cell_number(path, row, 1);
        if (row.cells.size() > 2) {
            p.sigma = cell_number(path, row, 2);
        }
        out.push_back(p);
    }
    return out;
}

std::vector<DecayPoint> parse_decay_csv(const std::string& path)
{
    const auto rows = read_csv(path, {"delay_us", "counts"});
    std::vector<DecayPoint> out;
    for (const auto& row : rows) {
        out.push_back({cell_number(path, row, 0), cell_number(path, row, 1)});
    }
    return out;
}

std::string binding_energy_csv(const std::vector<BindingEnergyDatum>& data)
{
    std::string out = "n,v,e_b_mhz,sigma_mhz\n";
    for (const auto& d : data) {
        out += std::to_string(d.n) + "," + (d.v ? std::to_string(*d.v) : "u") + "," + format_number(d.e_b) + "," +
               format_number(d.sigma) + "\n";
    }
    return out;
}

std::string wavefunction_table(const RadialWavefunction& wf)
{
    std::string out;
    out += "# n = " + std::to_string(wf.state().n) + "\n";
    out += "# n_star = " + format_number(wf.state().n_star) + "\n";
    out += "# energy_hartree = " + format_number(wf.state().energy) + "\n";
    out += "# defect_source = " + wf.defect_source() + "\n";
    out += "# mesh = " + wf.mesh_id() + "\n";
    out += "# truncation_radius_bohr = " + format_number(wf.truncation_radius()) + "\n";
    out += "r_bohr,u,density_bohr3\n";
    const auto& r = wf.r();
    const auto& u = wf.u();
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double density = r[i] > 0.0 ? u[i] * u[i] / (4.0 * std::numbers::pi * r[i] * r[i]) : 0.0;
        out += format_number(r[i]) + "," + format_number(u[i]) + "," + format_number(density) + "\n";
    }
    return out;
}

std::string potential_table(const PotentialCurve& curve, const PhysicalConstants& constants)
{
    std::string out;
    out += "# n = " + std::to_string(curve.meta.n) + "\n";
    out += "# n_star = " + format_number(curve.meta.n_star) + "\n";
    out += "# momentum_n = " + format_number(curve.meta.momentum_n) + "\n";
    if (curve.meta.scattering) {
        out += "# a_atom_bohr = " + format_number(curve.meta.scattering->a_atom) + "\n";
        out += "# alpha_au = " + format_number(curve.meta.scattering->alpha) + "\n";
    }
    out += "# defect_source = " + curve.meta.defect_source + "\n";
    out += "# mesh = " + curve.meta.mesh_id + "\n";
    out += "r_bohr,v_mhz\n";
    for (std::size_t i = 0; i < curve.r.size(); ++i) {
        out += format_number(curve.r[i]) + "," + format_number(energy_au_to_mhz(curve.v[i], constants)) + "\n";
    }
    return out;
}

namespace {

std::string scalar_text(const nlohmann::ordered_json& j)
{
    if (j.is_number_float()) {
        return format_number(j.get<double>());
    }
    if (j.is_number_integer()) {
        return std::to_string(j.get<long long>());
    }
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_null()) {
        return "-";
    }
    if (j.is_boolean()) {
        return j.get<bool>() ? "true" : "false";
    }
    return j.dump();
}

void json_walk(const nlohmann::ordered_json& j, std::string& out, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += inner + nlohmann::ordered_json(it.key()).dump() + ": ";
            json_walk(it.value(), out, indent + 1);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += pad + "}";
    }
    else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += inner;
            json_walk(j[i], out, indent + 1);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += pad + "]";
    }
    else if (j.is_number_float()) {
        out += format_number(j.get<double>());
    }
    else {
        out += j.dump();
    }
}

bool is_table(const nlohmann::ordered_json& j)
{
    if (!j.is_array() || j.empty()) {
        return false;
    }
    for (const auto& row : j) {
        if (!row.is_object()) {
            return false;
        }
        for (const auto& [k, v] : row.items()) {
            if (v.is_structured()) {
                return false;
            }
        }
    }
    return true;
}

void table_walk(const nlohmann::ordered_json& j, std::string& out, const std::string& prefix)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        const auto& v = it.value();
        if (v.is_object()) {
            table_walk(v, out, key);
        }
        else if (is_table(v)) {
            out += "[" + key + "]\n";
            std::string header;
            for (const auto& [k, unused] : v[0].items()) {
                header += (header.empty() ? "" : "\t") + k;
            }
            out += header + "\n";
            for (const auto& row : v) {
                std::string line;
                for (const auto& [k, cell] : row.items()) {
                    line += (line.empty() ? "" : "\t") + scalar_text(cell);
                }
                out += line + "\n";
            }
            out += "[/" + key + "]\n";
        }
        else if (v.is_array() && !v.empty() && v[0].is_object()) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                table_walk(v[i], out, key + "[" + std::to_string(i) + "]");
            }
        }
        else if (v.is_array()) {
            std::string line;
            for (const auto& e : v) {
                line += (line.empty() ? "" : ", ") + (e.is_structured() ? e.dump() : scalar_text(e));
            }
            out += key + " = " + line + "\n";
        }
        else {
            out += key + " = " + scalar_text(v) + "\n";
        }
    }
}

}  // namespace

std::string render_json(const nlohmann::ordered_json& report)
{
    std::string out;
    json_walk(report, out, 0);
    out += "\n";
    return out;
}

std::string render_table(const nlohmann::ordered_json& report)
{
    std::string out;
    table_walk(report, out, "");
    return out;
}

void OutputSet::add(std::string path, std::string content)
{
    files_.emplace_back(std::move(path), std::move(content));
}

void OutputSet::commit() const
{
    namespace fs = std::filesystem;
    std::vector<fs::path> staged;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& p : staged) {
            fs::remove(p, ec);
        }
    };
    for (const auto& [path, content] : files_) {
        const fs::path target(path);
        if (target.has_parent_path()) {
            std::error_code ec;
            fs::create_directories(target.parent_path(), ec);
        }
        const fs::path tmp = target.string() + ".partial";
        std::ofstream out(tmp, std::ios::binary);
        staged.push_back(tmp);
        if (!out || !(out << content) || !(out.flush())) {
            cleanup();
            throw InputError("cannot write output file '" + path + "'");
        }
    }
    for (const auto& [path, content] : files_) {
        if (fs::is_directory(path)) {
            cleanup();
            throw InputError("cannot write output file '" + path + "': it is a directory");
        }
    }
    // Existing targets are kept aside until every rename has succeeded.
    std::vector<fs::path> backups(files_.size());
    std::size_t moved = 0;
    auto rollback = [&] {
        std::error_code ec;
        for (std::size_t i = 0; i < moved; ++i) {
            fs::remove(files_[i].first, ec);
            if (!backups[i].empty()) {
                fs::rename(backups[i], files_[i].first, ec);
            }
        }
        cleanup();
    };
    for (; moved < files_.size(); ++moved) {
        const fs::path target(files_[moved].first);
        std::error_code ec;
        if (fs::exists(target)) {
            backups[moved] = target.string() + ".previous";
            fs::rename(target, backups[moved], ec);
        }
        if (!ec) {
            fs::rename(staged[moved], target, ec);
        }
        if (ec) {
            if (!backups[moved].empty()) {
                std::error_code ignored;
                fs::rename(backups[moved], target, ignored);
            }
            rollback();
            throw InputError("cannot move output into place: '" + files_[moved].first + "'");
        }
    }
    std::error_code ec;
    for (const auto& b : backups) {
        if (!b.empty()) {
            fs::remove(b, ec);
        }
    }
}

}  // namespace rydmol
