#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydmol/wavefunction.hpp"

namespace rydmol {

/// Low-energy electron-atom s-wave scattering, a(k) = a_atom + (pi/3) alpha k.
struct ScatteringModel {
    double a_atom = -18.5;  // bohr
    double alpha = 319.0;   // ground-state polarisability, a.u.

    /// Optional (k, a) table replacing the linear expansion; linear interpolation,
    /// clamped at the table ends.
    std::vector<std::pair<double, double>> a_of_k_table;

    void validate() const;
};

/// Which quantum number enters the semiclassical momentum k^2/2 = -1/(2 n^2) + 1/R.
enum class MomentumQuantumNumber { effective, principal };

/// k(R) = sqrt(2/R - 1/n^2); zero beyond the classical turning point 2 n^2.
double local_momentum(double n_value, double radius);

double scattering_length(const ScatteringModel& model, double k);
/// Radius where the linear a(k(R)) changes sign; empty unless a_atom < 0 < alpha.
std::optional<double> scattering_zero_radius(const ScatteringModel& model, double n_value);

struct PotentialMetadata {
    int n = 0;
    double n_star = 0.0;
    double momentum_n = 0.0;  // quantum number used in k(R)
    std::string defect_source;
    std::string mesh_id;
    std::optional<ScatteringModel> scattering;
};

/// Tabulated Born-Oppenheimer curve, hartree on a strictly increasing bohr grid.
struct PotentialCurve {
    std::vector<double> r;
    std::vector<double> v;
    PotentialMetadata meta;

    void validate() const;
    double min_value() const;
};

struct PotentialOptions {
    double r_min = 100.0;  // bohr
    MomentumQuantumNumber momentum = MomentumQuantumNumber::effective;
};

/// V(R) = 2 pi a(k(R)) |Psi(R)|^2 on the wavefunction mesh restricted to [r_min, r_max].
PotentialCurve build_potential(const RadialWavefunction& wf, const ScatteringModel& model, double momentum_n,
                               const PotentialOptions& options = {});
PotentialCurve build_potential(const RadialWavefunction& wf, const ScatteringModel& model,
                               const PotentialOptions& options = {});

/// Pointwise a*lhs + b*rhs; both curves must share a mesh.
PotentialCurve combine(double a, const PotentialCurve& lhs, double b, const PotentialCurve& rhs);

struct ValidityReport {
    double ratio = 0.0;  // (3/2 n*^2) / sqrt(alpha)
    bool ok = false;
};

ValidityReport validity_check(double n_star, double alpha, double threshold = 10.0);

}  // namespace rydmol
