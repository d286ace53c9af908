#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rydmol/potential.hpp"
#include "rydmol/spectro.hpp"
#include "rydmol/wavefunction.hpp"

namespace rydmol {

/// Scientific notation with 9 significant digits, e.g. -2.34000000e+01.
std::string format_number(double x);

Spectrum parse_spectrum_csv(const std::string& path);
std::vector<BindingEnergyDatum> parse_binding_energy_csv(const std::string& path);
/// Parses every file; all per-file errors are reported together.
std::vector<BindingEnergyDatum> parse_binding_energy_files(const std::vector<std::string>& paths);
std::vector<StarkPoint> parse_stark_csv(const std::string& path);
std::vector<DecayPoint> parse_decay_csv(const std::string& path);

std::string binding_energy_csv(const std::vector<BindingEnergyDatum>& data);
std::string wavefunction_table(const RadialWavefunction& wf);
std::string potential_table(const PotentialCurve& curve, const PhysicalConstants& constants = {});

/// Renders a report; both formats walk the same ordered JSON tree.
std::string render_json(const nlohmann::ordered_json& report);
std::string render_table(const nlohmann::ordered_json& report);

/// Files written all-or-nothing: staged to temporaries, renamed on commit.
class OutputSet {
public:
    void add(std::string path, std::string content);
    void commit() const;
    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace rydmol
