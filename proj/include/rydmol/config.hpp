#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydmol/molecular_model.hpp"
#include "rydmol/spectro.hpp"

namespace rydmol {

/// Everything a run needs; parsed from flat `key = value` text with `#` comments.
struct RunConfig {
    ModelSettings model;
    double a_atom = -18.5;
    ScatteringFitOptions fit;
    std::vector<int> n_list{35};
    double b0_gauss = 0.8;
    double g_eff = default_g_eff();
    std::optional<EnergyWindow> e_window_mhz;
    std::optional<double> refinement_tolerance_mhz;  // converted with the final constants
    LineShape line_shape = LineShape::gaussian;
    std::string format = "table";
    std::vector<std::string> inputs;
    std::string output_dir;

    void validate() const;
    /// Model settings with unit-dependent entries resolved against the configured constants.
    ModelSettings model_settings() const;
    /// Solver window converted to hartree (nullopt: (min V, 0)).
    std::optional<EnergyWindow> e_window_au() const;
};

/// Parses config text on top of the defaults. Errors name the line and key.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Applies one `key = value` assignment; shared by the file parser and CLI overrides.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

/// "35", "34-40" or "34,36,38-40".
std::vector<int> parse_n_list(const std::string& text);

/// Effective settings in canonical key order, numbers in 9-significant-digit notation.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config);

}  // namespace rydmol
