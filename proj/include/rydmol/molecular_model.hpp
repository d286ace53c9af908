#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rydmol/constants.hpp"
#include "rydmol/potential.hpp"
#include "rydmol/spectro.hpp"
#include "rydmol/vibrational.hpp"
#include "rydmol/wavefunction.hpp"

namespace rydmol {

struct ModelSettings {
    QuantumDefectModel defects = QuantumDefectModel::rubidium_ns();
    double alpha = 319.0;  // a.u.
    RadialGridSpec grid;
    PotentialOptions potential;
    SolverOptions solver = default_solver_options();
    WellSelectionOptions selection;
    PhysicalConstants constants;
    double mu = 0.0;  // electron masses; 0 selects m(87Rb)/2
    double validity_threshold = 10.0;
    unsigned threads = 1;

    double reduced_mass() const { return mu > 0.0 ? mu : reduced_mass_rb2(constants); }

    static SolverOptions default_solver_options()
    {
        SolverOptions s;
        s.max_levels = 6;
        s.min_tail_margin = 500.0;
        return s;
    }
};

struct ModelEnergies {
    int n = 0;
    std::optional<VibrationalLevel> v0;
    std::optional<VibrationalLevel> v1;
    std::size_t levels_found = 0;
    std::string diagnostics;

    std::optional<double> e_mhz(int v) const;
};

/// Rydberg wavefunctions and potential components cached per n; the potential
/// is affine in a_atom, V(a) = a * (V[a=1] - V[a=0]) + V[a=0].
class BindingEnergyModel {
public:
    BindingEnergyModel(ModelSettings settings, const std::vector<int>& n_list);

    const ModelSettings& settings() const { return settings_; }
    const std::vector<int>& n_values() const { return n_values_; }
    const RadialWavefunction& wavefunction(int n) const;

    PotentialCurve potential(int n, double a_atom) const;
    std::vector<VibrationalLevel> levels(int n, double a_atom) const;
    ModelEnergies evaluate(int n, double a_atom) const;
    /// One entry per n in n_values(), evaluated on settings().threads workers.
    std::vector<ModelEnergies> evaluate_all(double a_atom) const;

private:
    struct Entry {
        RadialWavefunction wf;
        PotentialCurve base;   // a_atom = 0
        PotentialCurve slope;  // dV/da_atom
    };
    const Entry& entry(int n) const;

    ModelSettings settings_;
    std::vector<int> n_values_;
    std::vector<Entry> entries_;
};

/// Map n -> outer-well levels for the given scattering model.
std::map<int, ModelEnergies> model_binding_energies(const std::vector<int>& n_list, const ScatteringModel& model,
                                                    ModelSettings settings);

struct ScatteringFitOptions {
    double a_lo = -30.0;  // bohr
    double a_hi = -5.0;
    double scan_step = 0.1;
    double tolerance = 1e-3;
};

struct ScatteringLengthFit {
    double a_best = 0.0;
    double a_lo = 0.0;  // Delta chi^2 = 1 interval
    double a_hi = 0.0;
    bool interval_clipped = false;
    double chi2 = 0.0;
    std::size_t data_used = 0;
    std::vector<std::optional<double>> residuals;  // MHz, input order; empty for unassigned data
    std::vector<std::pair<double, double>> scan;   // (a, chi2)
    bool unimodal = true;
    std::vector<std::string> warnings;
};

/// chi^2 of assigned data against the model at a_atom; deterministic summation order.
double scattering_chi2(const BindingEnergyModel& model, const std::vector<BindingEnergyDatum>& data, double a_atom);

ScatteringLengthFit fit_scattering_length(const std::vector<BindingEnergyDatum>& data, const ModelSettings& settings,
                                          const ScatteringFitOptions& options = {});

}  // namespace rydmol
