#include "rydmol/spectro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "rydmol/error.hpp"
#include "rydmol/least_squares.hpp"

namespace rydmol {

void Spectrum::validate() const
{
    if (detuning.size() != signal.size()) {
        throw InputError("spectrum: detuning and signal arrays differ in length");
    }
    if (detuning.size() < 8) {
        throw InputError("spectrum: need at least 8 points, got " + std::to_string(detuning.size()));
    }
    for (std::size_t i = 0; i < detuning.size(); ++i) {
        if (!std::isfinite(detuning[i]) || !std::isfinite(signal[i])) {
            throw InputError("spectrum: non-finite value at point " + std::to_string(i));
        }
        if (i > 0 && !(detuning[i] > detuning[i - 1])) {
            throw InputError("spectrum: detuning not strictly increasing at point " + std::to_string(i));
        }
    }
}

double line_profile(LineShape shape, double x, double center, double fwhm)
{
    const double d = (x - center) / fwhm;
    if (shape == LineShape::gaussian) {
        return std::exp(-4.0 * std::numbers::ln2 * d * d);
    }
    return 1.0 / (1.0 + 4.0 * d * d);
}

LineFit fit_line(const Spectrum& spectrum, FitWindow window, LineShape shape)
{
    spectrum.validate();
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < spectrum.detuning.size(); ++i) {
        if (spectrum.detuning[i] >= window.lo && spectrum.detuning[i] <= window.hi) {
            x.push_back(spectrum.detuning[i]);
            y.push_back(spectrum.signal[i]);
        }
    }
    if (x.size() < 8) {
        throw InputError("fit_line: window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                         "] holds " + std::to_string(x.size()) + " points (need >= 8)");
    }
    const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
    const double ymin = *min_it;
    const double ymax = *max_it;
    if (ymax - ymin <= 1e-12 * std::max(1.0, std::abs(ymax))) {
        throw InputError("fit_line: flat signal in window, no peak to fit");
    }

    const std::size_t peak = static_cast<std::size_t>(max_it - y.begin());
    const double half = 0.5 * (ymax + ymin);
    std::size_t left = peak;
    while (left > 0 && y[left] > half) {
        --left;
    }
    std::size_t right = peak;
    while (right + 1 < y.size() && y[right] > half) {
        ++right;
    }
    double width0 = x[right] - x[left];
    const double spacing = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    if (!(width0 > 0.0)) {
        width0 = 3.0 * spacing;
    }

    const std::size_t m = x.size();
    auto residuals = [&](std::span<const double> p, std::span<double> r) {
        const double w = std::abs(p[1]);
        for (std::size_t i = 0; i < m; ++i) {
            r[i] = p[2] * line_profile(shape, x[i], p[0], w) + p[3] - y[i];
        }
    };
    const LeastSquaresResult res =
        levenberg_marquardt(residuals, m, {x[peak], width0, ymax - ymin, ymin});
    if (!res.converged) {
        std::string summary = "fit_line: no convergence after " + std::to_string(res.iterations) + " iterations";
        if (!res.trace.empty()) {
            summary += "; first: " + res.trace.front() + "; last: " + res.trace.back();
        }
        throw NumericalError(summary);
    }
    LineFit fit;
    fit.shape = shape;
    fit.center = res.params[0];
    fit.width = std::abs(res.params[1]);
    fit.amplitude = res.params[2];
    fit.baseline = res.params[3];
    fit.chi2 = res.chi2;
    fit.iterations = res.iterations;
    const double s2 = m > 4 ? res.chi2 / static_cast<double>(m - 4) : 0.0;
    fit.sigma_center = std::sqrt(std::max(0.0, s2 * res.cov(0, 0)));
    fit.sigma_width = std::sqrt(std::max(0.0, s2 * res.cov(1, 1)));
    fit.sigma_amplitude = std::sqrt(std::max(0.0, s2 * res.cov(2, 2)));
    if (fit.center < window.lo || fit.center > window.hi) {
        throw NumericalError("fit_line: fitted center " + std::to_string(fit.center) + " MHz left the window");
    }
    return fit;
}

double default_g_eff(const PhysicalConstants& constants)
{
    constexpr double kShoulderShiftMhz = 3.0;
    constexpr double kShoulderFieldGauss = 0.8;
    return kShoulderShiftMhz / (constants.bohr_magneton_mhz_per_gauss * kShoulderFieldGauss);
}

double zeeman_correction(double b0_gauss, double g_eff, const PhysicalConstants& constants)
{
    if (!(b0_gauss >= 0.0)) {
        throw InputError("zeeman_correction: B0 must be non-negative");
    }
    return g_eff * constants.bohr_magneton_mhz_per_gauss * b0_gauss;
}

BindingEnergyDatum binding_energy(const LineFit& atomic, const LineFit& molecular, double delta_b, int n,
                                  std::optional<int> v)
{
    BindingEnergyDatum d;
    d.n = n;
    d.v = v;
    d.e_b = molecular.center - atomic.center + delta_b;
    d.sigma = std::hypot(atomic.sigma_center, molecular.sigma_center);
    d.non_molecular = !(d.e_b < 0.0);
    return d;
}

PolarizabilityFit fit_stark(const std::vector<StarkPoint>& series, const PhysicalConstants& constants)
{
    std::set<double> distinct;
    std::size_t with_sigma = 0;
    for (const auto& p : series) {
        if (!std::isfinite(p.field) || !std::isfinite(p.center) || !(p.sigma >= 0.0)) {
            throw InputError("fit_stark: non-finite field, center or sigma");
        }
        distinct.insert(std::abs(p.field));
        if (p.sigma > 0.0) {
            ++with_sigma;
        }
    }
    if (distinct.size() < 4) {
        throw InputError("fit_stark: need >= 4 distinct field values, got " + std::to_string(distinct.size()));
    }
    if (with_sigma != 0 && with_sigma != series.size()) {
        throw InputError("fit_stark: either all or no points must carry sigma");
    }
    const bool weighted = with_sigma == series.size();

    // Centred weighted regression of center on F^2.
    double sw = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& p : series) {
        const double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
        sw += w;
        sx += w * p.field * p.field;
        sy += w * p.center;
    }
    const double xbar = sx / sw;
    const double ybar = sy / sw;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& p : series) {
        const double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
        const double dx = p.field * p.field - xbar;
        sxx += w * dx * dx;
        sxy += w * dx * (p.center - ybar);
    }
    const double slope = sxy / sxx;
    const double intercept = ybar - slope * xbar;
    double chi2 = 0.0;
    for (const auto& p : series) {
        const double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
        const double res = p.center - (intercept + slope * p.field * p.field);
        chi2 += w * res * res;
    }
    const double scale = weighted ? 1.0 : chi2 / static_cast<double>(series.size() - 2);
    const double var_slope = scale / sxx;
    const double var_intercept = scale * (1.0 / sw + xbar * xbar / sxx);

    // shift[MHz] = -(alpha/2) F_au^2 * hartree_to_mhz with F_au = F / field_au_to_v_per_cm
    const double f0 = constants.field_au_to_v_per_cm;
    const double conv = 2.0 * f0 * f0 / constants.hartree_to_mhz;
    PolarizabilityFit fit;
    fit.alpha = -slope * conv;
    fit.sigma = std::sqrt(var_slope) * conv;
    fit.zero_field_center = intercept;
    fit.sigma_zero_field_center = std::sqrt(var_intercept);
    fit.chi2 = chi2;
    fit.weighted = weighted;
    return fit;
}

LifetimeFit fit_lifetime(const std::vector<DecayPoint>& decay)
{
    if (decay.size() < 5) {
        throw InputError("fit_lifetime: need >= 5 delay points, got " + std::to_string(decay.size()));
    }
    std::vector<DecayPoint> pts = decay;
    std::stable_sort(pts.begin(), pts.end(), [](const DecayPoint& a, const DecayPoint& b) { return a.delay < b.delay; });
    for (const auto& p : pts) {
        if (!std::isfinite(p.delay) || !std::isfinite(p.counts) || p.counts < 0.0) {
            throw InputError("fit_lifetime: counts must be finite and >= 0");
        }
    }
    const double span = pts.back().delay - pts.front().delay;
    if (!(span > 0.0)) {
        throw InputError("fit_lifetime: delays must not all coincide");
    }

    const double b0 = std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.counts < b.counts; })->counts;
    const double a0 = std::max(pts.front().counts - b0, 1.0);
    // Crude tau from the 1/e crossing.
    double tau0 = span / 3.0;
    for (const auto& p : pts) {
        if (p.counts - b0 < a0 / std::numbers::e) {
            tau0 = std::max(p.delay - pts.front().delay, 1e-3 * span);
            break;
        }
    }

    const std::size_t m = pts.size();
    const double t0 = pts.front().delay;
    std::vector<double> var(m);
    for (std::size_t i = 0; i < m; ++i) {
        var[i] = std::max(pts[i].counts, 1.0);
    }
    auto model = [&](std::span<const double> p, double t) { return p[0] * std::exp(-(t - t0) / p[1]) + p[2]; };
    auto residuals = [&](std::span<const double> p, std::span<double> r) {
        for (std::size_t i = 0; i < m; ++i) {
            r[i] = (model(p, pts[i].delay) - pts[i].counts) / std::sqrt(var[i]);
        }
    };

    std::vector<double> start{a0, tau0, b0};
    LeastSquaresResult res;
    for (int pass = 0; pass < 3; ++pass) {
        res = levenberg_marquardt(residuals, m, start);
        start = res.params;
        // Re-weight with the model expectation (Pearson chi^2).
        for (std::size_t i = 0; i < m; ++i) {
            var[i] = std::max(model(res.params, pts[i].delay), 1.0);
        }
    }
    const double tau = res.params[1];
    if (!res.converged || !(tau > 0.0) || tau > 1e3 * span || !(res.params[0] > 0.0)) {
        throw NumericalError("fit_lifetime: data show no decay (best tau at the admissible bound)");
    }
    LifetimeFit fit;
    fit.tau = tau;
    fit.sigma = std::sqrt(std::max(0.0, res.cov(1, 1)));
    // Amplitude is quoted at the first delay.
    fit.amplitude = res.params[0];
    fit.baseline = res.params[2];
    fit.chi2 = res.chi2;
    fit.iterations = res.iterations;
    return fit;
}

}  // namespace rydmol
