#pragma once

#include <string>
#include <vector>

#include "rydmol/spline.hpp"

namespace rydmol {

/// Rydberg-Ritz expansion delta(n) = d0 + d2/(n-d0)^2 + d4/(n-d0)^4 for one (l, j) series.
struct QuantumDefectModel {
    double delta0 = 0.0;
    double delta2 = 0.0;
    double delta4 = 0.0;
    std::string source = "hydrogenic (all defects zero)";

    /// Rb nS_1/2 series, Li, Mourachko, Noel, Gallagher, PRA 67, 052502 (2003).
    static QuantumDefectModel rubidium_ns();
    static QuantumDefectModel hydrogenic() { return {}; }

    void validate() const;
};

/// Smallest n for which the asymptotic Rydberg-Ritz series is accepted.
inline constexpr int kMinRitzN = 10;

double quantum_defect(const QuantumDefectModel& model, int n);

/// -1/(2 n*^2) with n* = n - defect. Throws InputError unless n* > 0.
double rydberg_energy(int n, double defect);

struct RydbergState {
    int n = 0;
    int l = 0;
    double defect = 0.0;
    double n_star = 0.0;
    double energy = 0.0;  // hartree

    static RydbergState make(int n, int l, const QuantumDefectModel& model);
};

struct RadialGridSpec {
    double step_x = 0.01;        // uniform step in x = sqrt(r), bohr^(1/2)
    double r_outer = 0.0;        // 0 selects 2 n (n + 15)
    double r_floor = 1.0e-3;     // innermost radius reached by the inward sweep
    double max_truncation_radius = 50.0;  // divergence beyond this radius is an error
};

/// Reduced radial function u(r) = r R(r) on a mesh uniform in sqrt(r).
/// The grid always starts at r = 0; points inside the truncation radius are zero.
class RadialWavefunction {
public:
    RadialWavefunction(RydbergState state, double step_x, std::vector<double> r, std::vector<double> u,
                       int nodes, double truncation_radius, std::string defect_source);

    const RydbergState& state() const { return state_; }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& u() const { return u_; }
    double step_x() const { return step_x_; }
    int nodes() const { return nodes_; }
    double truncation_radius() const { return truncation_radius_; }
    const std::string& defect_source() const { return defect_source_; }
    const std::string& mesh_id() const { return mesh_id_; }
    double r_max() const { return r_.back(); }

    /// Integral of u^2 dr (Simpson's rule in sqrt(r)).
    double norm() const;

    /// Cubic-spline interpolated u at radius r (bohr).
    double u_at(double r) const;
    double du_dr_at(double r) const;

private:
    RydbergState state_;
    double step_x_;
    std::vector<double> r_;
    std::vector<double> u_;
    int nodes_;
    double truncation_radius_;
    std::string defect_source_;
    std::string mesh_id_;
    CubicSpline spline_;  // u as a function of x = sqrt(r)
};

/// Number of nodes expected on (truncation radius, r_outer) for the given state.
int expected_node_count(const RydbergState& state);

/// Inward Numerov integration of the l = 0 Coulomb problem at E = -1/(2 n*^2).
RadialWavefunction compute_wavefunction(int n, int l, const QuantumDefectModel& model,
                                        const RadialGridSpec& grid = {});

/// |Psi(R)|^2 = (u(R)/R)^2 / (4 pi) in bohr^-3; R must lie in (0, r_max].
double probability_density_s(const RadialWavefunction& wf, double radius);

/// Radius of the outermost maximum of u^2, refined on the spline.
double outermost_antinode(const RadialWavefunction& wf);

/// Simpson integral of f(r) dr on a mesh uniform in sqrt(r) starting at r = 0.
double integrate_sqrt_mesh(const std::vector<double>& f, double step_x);

}  // namespace rydmol
