#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rydmol/constants.hpp"
#include "rydmol/potential.hpp"

namespace rydmol {

struct EnergyWindow {
    double lo = 0.0;  // hartree
    double hi = 0.0;
};

struct VibrationalLevel {
    int v = 0;               // label; index within the solved spectrum until relabelled
    std::size_t index = 0;   // global eigenvalue index (number of lower levels)
    double energy = 0.0;     // hartree, relative to V(inf) = 0
    double energy_mhz = 0.0;
    std::vector<double> r;   // potential grid, bohr
    std::vector<double> wf;  // chi(R), zero at both grid ends, int chi^2 dR = 1
    double r_expect = 0.0;   // <R>, bohr
    double span_lo = 0.0;    // central interval holding 90 % of |chi|^2
    double span_hi = 0.0;
    double b_rot_mhz = 0.0;
    int nodes = 0;           // sign changes of chi inside [span_lo, span_hi]

    double norm() const;
    /// Share of |chi|^2 at R >= r0.
    double fraction_beyond(double r0) const;
};

struct SolverOptions {
    std::size_t max_levels = 8;
    double energy_tolerance = 1e-14;  // hartree, bisection bracket before Rayleigh refinement
    /// Re-solve on every other grid point and demand agreement within tolerance.
    bool refinement_check = true;
    double refinement_tolerance = 0.05 / 6.579683920502e9;  // hartree (0.05 MHz)
    /// Required distance between the grid end and each level's outer turning point; 0 disables.
    double min_tail_margin = 0.0;
};

/// Quadrature weights of the trapezoid-like midpoint rule on a non-uniform grid.
std::vector<double> grid_weights(const std::vector<double>& r);

/// Finite-difference bound states of -(1/2mu) chi'' + V chi = E chi with chi = 0 at
/// both grid ends. Without a window, (min V, 0) is searched.
std::vector<VibrationalLevel> solve_bound_states(const PotentialCurve& potential, double mu,
                                                 std::optional<EnergyWindow> window = std::nullopt,
                                                 const SolverOptions& options = {},
                                                 const PhysicalConstants& constants = {});

struct ShootingOptions {
    double step = 0.0;  // uniform step for resampling; 0 selects the smallest grid spacing
};

/// Independent eigenvalue route: Numerov shooting with node counting on a uniform grid.
std::vector<double> shoot_eigenvalues(const PotentialCurve& potential, double mu, EnergyWindow window,
                                      std::size_t max_levels, const ShootingOptions& options = {});

struct WellSelectionOptions {
    double outer_lobe_fraction = 0.9;   // v = 0 must sit in the outermost lobe
    int outer_region_lobes = 3;         // outer-well region used for v = 1
    double outer_region_fraction = 0.5;
    double barrier_tolerance = 1e-3;    // V >= -tol * depth counts as a lobe boundary
};

struct OuterWellLevels {
    std::optional<VibrationalLevel> v0;
    std::optional<VibrationalLevel> v1;
    double outer_lobe_start = 0.0;    // bohr
    double outer_region_start = 0.0;  // bohr
    std::string diagnostics;
};

/// Lobe boundaries of V: start radii of the negative lobes, innermost first.
std::vector<double> lobe_starts(const PotentialCurve& potential, double barrier_tolerance = 1e-3);

OuterWellLevels select_outer_well_levels(const std::vector<VibrationalLevel>& levels,
                                         const PotentialCurve& potential,
                                         const WellSelectionOptions& options = {});

/// Energy equivalent of 1 / (2 mu <R>^2), in MHz.
double rotational_constant_mhz(double r_expect, double mu, const PhysicalConstants& constants = {});

}  // namespace rydmol
