#include "rydmol/molecular_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rydmol/error.hpp"
#include "rydmol/parallel.hpp"

namespace rydmol {

namespace {

// Re-raise with the failing principal quantum number attached.
template <class Fn>
auto with_n(int n, Fn&& fn)
{
    try {
        return fn();
    }
    catch (const InputError& e) {
        throw InputError("n = " + std::to_string(n) + ": " + e.what());
    }
    catch (const NumericalError& e) {
        throw NumericalError("n = " + std::to_string(n) + ": " + e.what());
    }
}

}  // namespace

std::optional<double> ModelEnergies::e_mhz(int v) const
{
    const auto& level = v == 0 ? v0 : v1;
    if (v < 0 || v > 1 || !level) {
        return std::nullopt;
    }
    return level->energy_mhz;
}

BindingEnergyModel::BindingEnergyModel(ModelSettings settings, const std::vector<int>& n_list)
    : settings_(std::move(settings))
{
    settings_.constants.validate();
    settings_.defects.validate();
    n_values_ = n_list;
    std::sort(n_values_.begin(), n_values_.end());
    n_values_.erase(std::unique(n_values_.begin(), n_values_.end()), n_values_.end());

    std::vector<std::optional<Entry>> slots(n_values_.size());
    parallel_for(n_values_.size(), settings_.threads, [&](std::size_t i) {
        const int n = n_values_[i];
        with_n(n, [&] {
            const RydbergState state = RydbergState::make(n, 0, settings_.defects);
            const ValidityReport validity = validity_check(state.n_star, settings_.alpha, settings_.validity_threshold);
            if (!validity.ok) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "validity check failed: (3/2 n*^2)/sqrt(alpha) = %.3f < %.3f",
                              validity.ratio, settings_.validity_threshold);
                throw InputError(buf);
            }
            RadialWavefunction wf = compute_wavefunction(n, 0, settings_.defects, settings_.grid);
            ScatteringModel zero{0.0, settings_.alpha, {}};
            ScatteringModel unit{1.0, settings_.alpha, {}};
            PotentialCurve base = build_potential(wf, zero, settings_.potential);
            PotentialCurve slope = combine(1.0, build_potential(wf, unit, settings_.potential), -1.0, base);
            slots[i].emplace(Entry{std::move(wf), std::move(base), std::move(slope)});
            return 0;
        });
    });
    for (auto& s : slots) {
        entries_.push_back(std::move(*s));
    }
}

const BindingEnergyModel::Entry& BindingEnergyModel::entry(int n) const
{
    const auto it = std::lower_bound(n_values_.begin(), n_values_.end(), n);
    if (it == n_values_.end() || *it != n) {
        throw InputError("model has no state with n = " + std::to_string(n));
    }
    return entries_[static_cast<std::size_t>(it - n_values_.begin())];
}

const RadialWavefunction& BindingEnergyModel::wavefunction(int n) const
{
    return entry(n).wf;
}

PotentialCurve BindingEnergyModel::potential(int n, double a_atom) const
{
    const Entry& e = entry(n);
    ScatteringModel model{a_atom, settings_.alpha, {}};
    model.validate();
    PotentialCurve curve = combine(a_atom, e.slope, 1.0, e.base);
    curve.meta.scattering = model;
    return curve;
}

std::vector<VibrationalLevel> BindingEnergyModel::levels(int n, double a_atom) const
{
    return with_n(n, [&] {
        return solve_bound_states(potential(n, a_atom), settings_.reduced_mass(), std::nullopt, settings_.solver,
                                  settings_.constants);
    });
}

ModelEnergies BindingEnergyModel::evaluate(int n, double a_atom) const
{
    ModelEnergies out;
    out.n = n;
    const PotentialCurve curve = potential(n, a_atom);
    const auto found = levels(n, a_atom);
    out.levels_found = found.size();
    if (found.empty()) {
        out.diagnostics = "no bound states below threshold";
        return out;
    }
    OuterWellLevels sel = select_outer_well_levels(found, curve, settings_.selection);
    out.v0 = std::move(sel.v0);
    out.v1 = std::move(sel.v1);
    out.diagnostics = sel.diagnostics;
    return out;
}

std::vector<ModelEnergies> BindingEnergyModel::evaluate_all(double a_atom) const
{
    std::vector<ModelEnergies> out(n_values_.size());
    parallel_for(n_values_.size(), settings_.threads,
                 [&](std::size_t i) { out[i] = evaluate(n_values_[i], a_atom); });
    return out;
}

std::map<int, ModelEnergies> model_binding_energies(const std::vector<int>& n_list, const ScatteringModel& model,
                                                    ModelSettings settings)
{
    model.validate();
    settings.alpha = model.alpha;
    const BindingEnergyModel m(std::move(settings), n_list);
    std::map<int, ModelEnergies> out;
    for (auto& e : m.evaluate_all(model.a_atom)) {
        out.emplace(e.n, std::move(e));
    }
    return out;
}

namespace {

std::vector<BindingEnergyDatum> assigned_sorted(const std::vector<BindingEnergyDatum>& data)
{
    std::vector<BindingEnergyDatum> out;
    for (const auto& d : data) {
        if (d.v) {
            out.push_back(d);
        }
    }
    std::sort(out.begin(), out.end(), [](const BindingEnergyDatum& a, const BindingEnergyDatum& b) {
        return std::tie(a.n, *a.v, a.e_b, a.sigma) < std::tie(b.n, *b.v, b.e_b, b.sigma);
    });
    return out;
}

double model_value(const std::vector<ModelEnergies>& energies, const std::vector<int>& n_values, int n, int v)
{
    const auto it = std::lower_bound(n_values.begin(), n_values.end(), n);
    // A level that does not exist at this a_atom sits at the threshold.
    return energies[static_cast<std::size_t>(it - n_values.begin())].e_mhz(v).value_or(0.0);
}

double chi2_sorted(const BindingEnergyModel& model, const std::vector<BindingEnergyDatum>& sorted, double a_atom)
{
    const auto energies = model.evaluate_all(a_atom);
    double chi2 = 0.0;
    for (const auto& d : sorted) {
        const double r = (model_value(energies, model.n_values(), d.n, *d.v) - d.e_b) / d.sigma;
        chi2 += r * r;
    }
    return chi2;
}

}  // namespace

double scattering_chi2(const BindingEnergyModel& model, const std::vector<BindingEnergyDatum>& data, double a_atom)
{
    return chi2_sorted(model, assigned_sorted(data), a_atom);
}

ScatteringLengthFit fit_scattering_length(const std::vector<BindingEnergyDatum>& data, const ModelSettings& settings,
                                          const ScatteringFitOptions& options)
{
    const auto sorted = assigned_sorted(data);
    if (sorted.empty()) {
        throw InputError("fit_scattering_length: no assigned (v = 0 or 1) data");
    }
    for (const auto& d : sorted) {
        if (!(d.sigma > 0.0)) {
            throw InputError("fit_scattering_length: sigma must be positive (n = " + std::to_string(d.n) + ")");
        }
        if (*d.v < 0 || *d.v > 1) {
            throw InputError("fit_scattering_length: only v = 0, 1 can be modelled");
        }
    }
    if (!(options.a_hi > options.a_lo) || !(options.scan_step > 0.0)) {
        throw InputError("fit_scattering_length: invalid scan range");
    }
    std::vector<int> n_list;
    for (const auto& d : sorted) {
        n_list.push_back(d.n);
    }
    // The scan runs without the half-grid refinement check; it is applied once at a_best.
    ModelSettings scan_settings = settings;
    scan_settings.solver.refinement_check = false;
    const BindingEnergyModel model(scan_settings, n_list);
    auto chi2 = [&](double a) { return chi2_sorted(model, sorted, a); };

    ScatteringLengthFit fit;
    fit.data_used = sorted.size();
    const auto steps = static_cast<std::size_t>(std::llround((options.a_hi - options.a_lo) / options.scan_step));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double a = std::min(options.a_lo + options.scan_step * static_cast<double>(i), options.a_hi);
        fit.scan.emplace_back(a, chi2(a));
    }
    std::size_t best = 0;
    std::size_t minima = 0;
    for (std::size_t i = 0; i < fit.scan.size(); ++i) {
        if (fit.scan[i].second < fit.scan[best].second) {
            best = i;
        }
        if (i > 0 && i + 1 < fit.scan.size() && fit.scan[i].second < fit.scan[i - 1].second &&
            fit.scan[i].second < fit.scan[i + 1].second) {
            ++minima;
        }
    }
    if (best == 0 || best + 1 == fit.scan.size()) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "fit_scattering_length: chi^2 minimum at the scan edge a = %.3f bohr; widen a_range [%.3f, %.3f]",
                      fit.scan[best].first, options.a_lo, options.a_hi);
        throw NumericalError(buf);
    }
    if (minima > 1) {
        fit.unimodal = false;
        fit.warnings.push_back("chi^2(a) has " + std::to_string(minima) + " local minima over the scan range");
    }

    // Golden-section refinement inside the neighbouring scan points.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = fit.scan[best - 1].first;
    double hi = fit.scan[best + 1].first;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = chi2(x1);
    double f2 = chi2(x2);
    while (hi - lo > options.tolerance) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = chi2(x1);
        }
        else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = chi2(x2);
        }
    }
    fit.a_best = 0.5 * (lo + hi);
    fit.chi2 = chi2(fit.a_best);
    if (fit.scan[best].second < fit.chi2) {
        fit.a_best = fit.scan[best].first;
        fit.chi2 = fit.scan[best].second;
    }

    // Delta chi^2 = 1 crossings, bracketed on the scan and bisected.
    const double target = fit.chi2 + 1.0;
    auto crossing = [&](int direction) {
        std::size_t i = best;
        while (true) {
            if (direction < 0 ? i == 0 : i + 1 == fit.scan.size()) {
                fit.interval_clipped = true;
                return fit.scan[i].first;
            }
            const std::size_t j = direction < 0 ? i - 1 : i + 1;
            if (fit.scan[j].second >= target) {
                double inner = fit.a_best;
                double outer = fit.scan[j].first;
                for (int iter = 0; iter < 40 && std::abs(outer - inner) > 1e-4; ++iter) {
                    const double mid = 0.5 * (inner + outer);
                    if (chi2(mid) >= target) {
                        outer = mid;
                    }
                    else {
                        inner = mid;
                    }
                }
                return 0.5 * (inner + outer);
            }
            i = j;
        }
    };
    fit.a_lo = crossing(-1);
    fit.a_hi = crossing(+1);
    if (fit.interval_clipped) {
        fit.warnings.push_back("Delta chi^2 = 1 interval reaches the scan range edge");
    }

    const BindingEnergyModel checked(settings, n_list);
    const auto energies = checked.evaluate_all(fit.a_best);
    fit.residuals.reserve(data.size());
    for (const auto& d : data) {
        if (!d.v) {
            fit.residuals.emplace_back(std::nullopt);
            continue;
        }
        fit.residuals.emplace_back(model_value(energies, checked.n_values(), d.n, *d.v) - d.e_b);
    }
    return fit;
}

}  // namespace rydmol
