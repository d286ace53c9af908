#include "rydmol/vibrational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rydmol/error.hpp"
#include "rydmol/tridiagonal.hpp"

namespace rydmol {

std::vector<double> grid_weights(const std::vector<double>& r)
{
    const std::size_t n = r.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? r[i] - r[i - 1] : 0.0;
        const double right = i + 1 < n ? r[i + 1] - r[i] : 0.0;
        w[i] = 0.5 * (left + right);
    }
    return w;
}

double VibrationalLevel::norm() const
{
    const auto w = grid_weights(r);
    double s = 0.0;
    for (std::size_t i = 0; i < wf.size(); ++i) {
        s += w[i] * wf[i] * wf[i];
    }
    return s;
}

double VibrationalLevel::fraction_beyond(double r0) const
{
    const auto w = grid_weights(r);
    double inside = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < wf.size(); ++i) {
        const double p = w[i] * wf[i] * wf[i];
        total += p;
        if (r[i] >= r0) {
            inside += p;
        }
    }
    return total > 0.0 ? inside / total : 0.0;
}

double rotational_constant_mhz(double r_expect, double mu, const PhysicalConstants& constants)
{
    if (!(r_expect > 0.0) || !(mu > 0.0)) {
        throw InputError("rotational_constant: <R> and mu must be positive");
    }
    return energy_au_to_mhz(1.0 / (2.0 * mu * r_expect * r_expect), constants);
}

namespace {

// W^(-1/2) A W^(-1/2) for the interior points of a (possibly non-uniform) grid.
SymmetricTridiagonal build_operator(const std::vector<double>& r, const std::vector<double>& v, double mu,
                                    std::vector<double>& weights)
{
    const std::size_t n = r.size();
    const std::size_t m = n - 2;
    std::vector<double> diag(m);
    std::vector<double> off(m > 0 ? m - 1 : 0);
    weights.assign(m, 0.0);
    const double c = 0.5 / mu;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t i = j + 1;
        const double hm = r[i] - r[i - 1];
        const double hp = r[i + 1] - r[i];
        weights[j] = 0.5 * (hm + hp);
        diag[j] = (c * (1.0 / hm + 1.0 / hp)) / weights[j] + v[i];
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double hp = r[j + 2] - r[j + 1];
        off[j] = -c / hp / std::sqrt(weights[j] * weights[j + 1]);
    }
    return SymmetricTridiagonal(std::move(diag), std::move(off));
}

std::pair<double, double> spectrum_bounds(const std::vector<double>& v, double mu, const std::vector<double>& r)
{
    double hmin = r.back() - r.front();
    for (std::size_t i = 1; i < r.size(); ++i) {
        hmin = std::min(hmin, r[i] - r[i - 1]);
    }
    const double vmin = *std::min_element(v.begin(), v.end());
    const double vmax = *std::max_element(v.begin(), v.end());
    return {vmin - 1e-12 * std::abs(vmin), vmax + 4.0 / (mu * hmin * hmin)};
}

}  // namespace

std::vector<VibrationalLevel> solve_bound_states(const PotentialCurve& potential, double mu,
                                                 std::optional<EnergyWindow> window, const SolverOptions& options,
                                                 const PhysicalConstants& constants)
{
    potential.validate();
    if (!(mu > 0.0)) {
        throw InputError("solve_bound_states: mu must be positive");
    }
    const auto& r = potential.r;
    const auto& v = potential.v;
    const double vmin = potential.min_value();
    EnergyWindow win = window.value_or(EnergyWindow{vmin, 0.0});
    win.lo = std::max(win.lo, vmin);
    if (!(win.hi > win.lo)) {
        return {};
    }

    std::vector<double> weights;
    const SymmetricTridiagonal op = build_operator(r, v, mu, weights);
    const std::size_t first = op.count_below(win.lo);
    const std::vector<double> energies = op.eigenvalues_in(win.lo, win.hi, options.max_levels, options.energy_tolerance);

    if (options.refinement_check && !energies.empty()) {
        std::vector<double> rh;
        std::vector<double> vh;
        for (std::size_t i = 0; i < r.size(); i += 2) {
            rh.push_back(r[i]);
            vh.push_back(v[i]);
        }
        if ((r.size() - 1) % 2 == 1) {
            rh.push_back(r.back());
            vh.push_back(v.back());
        }
        if (rh.size() >= 5) {
            std::vector<double> wh;
            const SymmetricTridiagonal coarse = build_operator(rh, vh, mu, wh);
            const auto [blo, bhi] = spectrum_bounds(vh, mu, rh);
            for (std::size_t j = 0; j < energies.size(); ++j) {
                const double e_coarse = coarse.eigenvalue(first + j, blo, bhi, options.energy_tolerance);
                const double shift = std::abs(e_coarse - energies[j]);
                if (shift > options.refinement_tolerance) {
                    char buf[256];
                    std::snprintf(buf, sizeof buf,
                                  "solve_bound_states: grid too coarse; level %zu shifts by %.3e hartree "
                                  "(%.3e MHz) between full and half grid (tolerance %.3e hartree)",
                                  first + j, shift, energy_au_to_mhz(shift, constants),
                                  options.refinement_tolerance);
                    throw NumericalError(buf);
                }
            }
        }
    }

    std::vector<VibrationalLevel> levels;
    std::vector<std::vector<double>> vectors;
    const auto full_weights = grid_weights(r);
    for (std::size_t j = 0; j < energies.size(); ++j) {
        std::vector<double> psi = op.eigenvector(energies[j], vectors);
        vectors.push_back(psi);
        // The Rayleigh quotient sharpens the bisection bracket to machine precision.
        const double rq = op.rayleigh_quotient(psi);
        const double energy = std::abs(rq - energies[j]) <= 2.0 * options.energy_tolerance ? rq : energies[j];

        VibrationalLevel level;
        level.index = first + j;
        level.v = static_cast<int>(level.index);
        level.energy = energy;
        level.energy_mhz = energy_au_to_mhz(energy, constants);
        level.r = r;
        level.wf.assign(r.size(), 0.0);
        std::size_t peak = 0;
        for (std::size_t k = 0; k < psi.size(); ++k) {
            level.wf[k + 1] = psi[k] / std::sqrt(weights[k]);
            if (std::abs(psi[k]) > std::abs(psi[peak])) {
                peak = k;
            }
        }
        if (psi[peak] < 0.0) {
            for (double& x : level.wf) {
                x = -x;
            }
        }

        double total = 0.0;
        double moment = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            const double p = full_weights[k] * level.wf[k] * level.wf[k];
            total += p;
            moment += p * r[k];
        }
        level.r_expect = moment / total;
        double acc = 0.0;
        bool have_lo = false;
        for (std::size_t k = 0; k < r.size(); ++k) {
            acc += full_weights[k] * level.wf[k] * level.wf[k] / total;
            if (!have_lo && acc >= 0.05) {
                level.span_lo = r[k];
                have_lo = true;
            }
            if (acc >= 0.95) {
                level.span_hi = r[k];
                break;
            }
        }
        const double amp = std::abs(level.wf[peak + 1]);
        double prev = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k] < level.span_lo || r[k] > level.span_hi || std::abs(level.wf[k]) < 1e-8 * amp) {
                continue;
            }
            if (prev != 0.0 && prev * level.wf[k] < 0.0) {
                ++level.nodes;
            }
            prev = level.wf[k];
        }
        if (level.r_expect > 0.0) {
            level.b_rot_mhz = rotational_constant_mhz(level.r_expect, mu, constants);
        }

        if (options.min_tail_margin > 0.0) {
            double turning = r.front();
            for (std::size_t k = r.size(); k-- > 0;) {
                if (v[k] <= level.energy) {
                    turning = r[k];
                    break;
                }
            }
            if (r.back() - turning < options.min_tail_margin) {
                char buf[200];
                std::snprintf(buf, sizeof buf,
                              "solve_bound_states: grid ends %.1f bohr beyond the outer turning point %.1f of "
                              "level %zu (need %.1f)",
                              r.back() - turning, turning, level.index, options.min_tail_margin);
                throw NumericalError(buf);
            }
        }
        levels.push_back(std::move(level));
    }
    return levels;
}

std::vector<double> lobe_starts(const PotentialCurve& potential, double barrier_tolerance)
{
    const auto& r = potential.r;
    const auto& v = potential.v;
    const double vmin = potential.min_value();
    std::vector<double> starts;
    if (!(vmin < 0.0)) {
        return starts;
    }
    const double threshold = -barrier_tolerance * std::abs(vmin);
    bool in_well = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const bool well = v[i] < threshold;
        if (well && !in_well) {
            starts.push_back(r[i]);
        }
        in_well = well;
    }
    return starts;
}

OuterWellLevels select_outer_well_levels(const std::vector<VibrationalLevel>& levels,
                                         const PotentialCurve& potential, const WellSelectionOptions& options)
{
    if (levels.empty()) {
        throw InputError("select_outer_well_levels: no levels supplied");
    }
    OuterWellLevels out;
    const auto starts = lobe_starts(potential, options.barrier_tolerance);
    const double grid_start = potential.r.front();
    out.outer_lobe_start = starts.size() >= 2 ? starts.back() : grid_start;
    const std::size_t k = static_cast<std::size_t>(std::max(1, options.outer_region_lobes));
    out.outer_region_start = starts.size() > k ? starts[starts.size() - k] : grid_start;

    std::size_t i = 0;
    for (; i < levels.size(); ++i) {
        if (levels[i].fraction_beyond(out.outer_lobe_start) >= options.outer_lobe_fraction) {
            out.v0 = levels[i];
            out.v0->v = 0;
            break;
        }
    }
    if (!out.v0) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "no level holds >= %.0f%% of its density beyond R = %.1f bohr (outermost lobe); "
                      "%zu levels examined",
                      100.0 * options.outer_lobe_fraction, out.outer_lobe_start, levels.size());
        out.diagnostics = buf;
        return out;
    }
    for (++i; i < levels.size(); ++i) {
        if (levels[i].fraction_beyond(out.outer_region_start) >= options.outer_region_fraction) {
            out.v1 = levels[i];
            out.v1->v = 1;
            break;
        }
    }
    if (!out.v1) {
        out.diagnostics = "no excited level localised in the outer-well region";
    }
    return out;
}

}  // namespace rydmol
