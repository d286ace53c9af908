#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydmol/constants.hpp"

namespace rydmol {

struct SpectrumMeta {
    int n = 0;
    double b0_gauss = 0.0;
    int averages = 1;
};

/// Detuning (MHz, relative to the atomic line) against signal (counts).
struct Spectrum {
    std::vector<double> detuning;
    std::vector<double> signal;
    SpectrumMeta meta;

    void validate() const;
};

enum class LineShape { gaussian, lorentzian };

struct LineFit {
    double center = 0.0;  // MHz
    double width = 0.0;   // FWHM, MHz
    double amplitude = 0.0;
    double baseline = 0.0;
    double sigma_center = 0.0;
    double sigma_width = 0.0;
    double sigma_amplitude = 0.0;
    double chi2 = 0.0;
    int iterations = 0;
    LineShape shape = LineShape::gaussian;
};

struct FitWindow {
    double lo = 0.0;  // MHz
    double hi = 0.0;
};

/// Single line plus constant baseline, least squares inside the window.
LineFit fit_line(const Spectrum& spectrum, FitWindow window, LineShape shape = LineShape::gaussian);

double line_profile(LineShape shape, double x, double center, double fwhm);

/// Default effective g factor: the spin-flip shoulder at about -3 MHz for B0 = 0.8 G.
double default_g_eff(const PhysicalConstants& constants = {});

/// Delta_B = g_eff * mu_B * B0 in MHz.
double zeeman_correction(double b0_gauss, double g_eff, const PhysicalConstants& constants = {});

struct BindingEnergyDatum {
    int n = 0;
    std::optional<int> v;  // empty: unassigned line
    double e_b = 0.0;      // MHz, negative when bound
    double sigma = 0.0;    // MHz
    bool non_molecular = false;  // e_b >= 0: flagged, kept
};

/// e_b = molecular - atomic + delta_b, sigma from the quadrature sum.
BindingEnergyDatum binding_energy(const LineFit& atomic, const LineFit& molecular, double delta_b, int n = 0,
                                  std::optional<int> v = std::nullopt);

struct StarkPoint {
    double field = 0.0;   // V/cm
    double center = 0.0;  // MHz
    double sigma = 0.0;   // MHz; 0 = unknown (unweighted fit)
};

struct PolarizabilityFit {
    double alpha = 0.0;  // a.u.
    double sigma = 0.0;  // a.u.
    double zero_field_center = 0.0;
    double sigma_zero_field_center = 0.0;
    double chi2 = 0.0;
    bool weighted = false;
    double systematic_fraction = 0.12;  // field-calibration systematic, echoed only
};

/// center(F) = c0 - (alpha/2) F^2, linear least squares in F^2.
PolarizabilityFit fit_stark(const std::vector<StarkPoint>& series, const PhysicalConstants& constants = {});

struct DecayPoint {
    double delay = 0.0;   // us
    double counts = 0.0;
};

struct LifetimeFit {
    double tau = 0.0;  // us
    double sigma = 0.0;
    double amplitude = 0.0;
    double baseline = 0.0;
    double chi2 = 0.0;
    int iterations = 0;
};

/// A exp(-t/tau) + baseline with Poisson weights.
LifetimeFit fit_lifetime(const std::vector<DecayPoint>& decay);

}  // namespace rydmol
