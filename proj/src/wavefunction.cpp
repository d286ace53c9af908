#include "rydmol/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "rydmol/error.hpp"

namespace rydmol {

QuantumDefectModel QuantumDefectModel::rubidium_ns()
{
    return {3.1311804, 0.1784, 0.0,
            "Rb nS1/2 Rydberg-Ritz: Li, Mourachko, Noel, Gallagher, PRA 67, 052502 (2003)"};
}

void QuantumDefectModel::validate() const
{
    if (!std::isfinite(delta0) || !std::isfinite(delta2) || !std::isfinite(delta4)) {
        throw InputError("quantum defect coefficients must be finite");
    }
    if (delta0 < 0.0 || delta0 > 5.0) {
        throw InputError("quantum defect delta0 outside [0, 5]");
    }
}

double quantum_defect(const QuantumDefectModel& model, int n)
{
    if (n < kMinRitzN) {
        throw InputError("quantum_defect: n = " + std::to_string(n) + " below the Rydberg-Ritz validity floor " +
                         std::to_string(kMinRitzN));
    }
    const double m = static_cast<double>(n) - model.delta0;
    const double inv2 = 1.0 / (m * m);
    return model.delta0 + model.delta2 * inv2 + model.delta4 * inv2 * inv2;
}

double rydberg_energy(int n, double defect)
{
    const double n_star = static_cast<double>(n) - defect;
    if (!(n_star > 0.0)) {
        throw InputError("rydberg_energy: effective quantum number must be positive");
    }
    return -0.5 / (n_star * n_star);
}

RydbergState RydbergState::make(int n, int l, const QuantumDefectModel& model)
{
    RydbergState s;
    s.n = n;
    s.l = l;
    s.defect = quantum_defect(model, n);
    s.n_star = n - s.defect;
    s.energy = rydberg_energy(n, s.defect);
    return s;
}

namespace {

bool is_hydrogenic(const RydbergState& s)
{
    return std::abs(s.n_star - std::round(s.n_star)) < 1e-9;
}

std::string make_mesh_id(double step_x, std::size_t points)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "sqrt-mesh(step_x=%.8e,points=%zu)", step_x, points);
    return buf;
}

}  // namespace

int expected_node_count(const RydbergState& s)
{
    // Nodes of the decaying Coulomb solution on (0, inf) number ceil(n*) - l - 1.
    // For non-integer n* the innermost stored node is the truncation point itself.
    const int total = static_cast<int>(std::ceil(s.n_star - 1e-9)) - s.l - 1;
    return is_hydrogenic(s) ? total : total - 1;
}

double integrate_sqrt_mesh(const std::vector<double>& f, double step_x)
{
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0) {
        throw InputError("integrate_sqrt_mesh: need an odd number (>= 3) of mesh points");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = step_x * static_cast<double>(i);
        const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * f[i] * 2.0 * x;
    }
    return sum * step_x / 3.0;
}

RadialWavefunction::RadialWavefunction(RydbergState state, double step_x, std::vector<double> r,
                                       std::vector<double> u, int nodes, double truncation_radius,
                                       std::string defect_source)
    : state_(state),
      step_x_(step_x),
      r_(std::move(r)),
      u_(std::move(u)),
      nodes_(nodes),
      truncation_radius_(truncation_radius),
      defect_source_(std::move(defect_source)),
      mesh_id_(make_mesh_id(step_x_, r_.size()))
{
    std::vector<double> x(r_.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = step_x_ * static_cast<double>(i);
    }
    spline_ = CubicSpline(x, u_);
}

double RadialWavefunction::norm() const
{
    std::vector<double> u2(u_.size());
    std::transform(u_.begin(), u_.end(), u2.begin(), [](double v) { return v * v; });
    return integrate_sqrt_mesh(u2, step_x_);
}

double RadialWavefunction::u_at(double r) const
{
    if (!(r >= 0.0 && r <= r_.back())) {
        throw InputError("radius outside wavefunction grid");
    }
    return spline_(std::sqrt(r));
}

double RadialWavefunction::du_dr_at(double r) const
{
    if (!(r > 0.0 && r <= r_.back())) {
        throw InputError("radius outside wavefunction grid");
    }
    const double x = std::sqrt(r);
    return spline_.derivative(x) / (2.0 * x);
}

RadialWavefunction compute_wavefunction(int n, int l, const QuantumDefectModel& model, const RadialGridSpec& grid)
{
    if (l != 0) {
        throw InputError("compute_wavefunction: only l = 0 is supported");
    }
    model.validate();
    const RydbergState state = RydbergState::make(n, l, model);
    const double ns = state.n_star;

    const double h = grid.step_x;
    if (!(h > 0.0)) {
        throw InputError("compute_wavefunction: step_x must be positive");
    }
    // Local wavelength in the Coulomb region spans pi / (sqrt(2) h) points of a sqrt mesh.
    const double points_per_wavelength = std::numbers::pi / (std::sqrt(2.0) * h);
    if (points_per_wavelength < 20.0) {
        throw InputError("compute_wavefunction: step_x gives " + std::to_string(points_per_wavelength) +
                         " points per de Broglie wavelength (need >= 20)");
    }
    const double r_outer = grid.r_outer > 0.0 ? grid.r_outer : 2.0 * n * (n + 15.0);
    if (r_outer < 2.0 * ns * ns + 10.0 * ns) {
        throw InputError("compute_wavefunction: r_outer must be >= 2 n*^2 + 10 n*");
    }

    std::size_t last = static_cast<std::size_t>(std::ceil(std::sqrt(r_outer) / h));
    if (last % 2 == 1) {
        ++last;  // odd point count for Simpson
    }
    const std::size_t first =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(grid.r_floor) / h)));
    if (first + 4 >= last) {
        throw InputError("compute_wavefunction: grid has too few points");
    }

    const std::size_t count = last + 1;
    std::vector<double> r(count);
    std::vector<double> f(count, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = h * static_cast<double>(i);
        r[i] = x * x;
        if (i > 0) {
            // y'' = g(x) y with u = sqrt(x) y and r = x^2.
            const double g = -8.0 - 8.0 * state.energy * x * x + 0.75 / (x * x);
            f[i] = 1.0 - h * h * g / 12.0;
        }
    }

    std::vector<double> y(count, 0.0);
    {
        const double x = h * static_cast<double>(last);
        const double g = -8.0 - 8.0 * state.energy * x * x + 0.75 / (x * x);
        y[last] = 1e-30;
        y[last - 1] = 1e-30 * std::exp(h * std::sqrt(std::max(g, 0.0)));
    }

    // Divergence is only meaningful inside the classically allowed region.
    const double r_turn = 2.0 * ns * ns;
    double running_max = 0.0;
    std::size_t stop = first;
    bool diverged = false;
    for (std::size_t i = last - 1; i > first; --i) {
        y[i - 1] = ((12.0 - 10.0 * f[i]) * y[i] - f[i + 1] * y[i + 1]) / f[i - 1];
        if (std::abs(y[i - 1]) > 1e200) {
            for (std::size_t j = i - 1; j <= last; ++j) {
                y[j] *= 1e-200;
            }
            running_max *= 1e-200;
        }
        const double amplitude = std::abs(y[i - 1]) * std::sqrt(h * static_cast<double>(i - 1));
        if (r[i - 1] < r_turn && amplitude > 1e3 * running_max) {
            if (r[i - 1] > grid.max_truncation_radius) {
                char buf[200];
                std::snprintf(buf, sizeof buf,
                              "compute_wavefunction: inward solution diverges at r = %.3f bohr; "
                              "suggest an inner cutoff r_floor >= %.3f bohr",
                              r[i - 1], r[i - 1]);
                throw NumericalError(buf);
            }
            stop = i;
            diverged = true;
            break;
        }
        running_max = std::max(running_max, amplitude);
    }

    std::vector<double> u(count, 0.0);
    for (std::size_t i = stop; i <= last; ++i) {
        u[i] = std::sqrt(h * static_cast<double>(i)) * y[i];
    }

    double truncation_radius = 0.0;
    if (diverged || !is_hydrogenic(state)) {
        // Irregular at the origin: cut at the innermost node and zero everything inside.
        std::size_t cut = 0;
        for (std::size_t i = stop; i < last; ++i) {
            if (u[i] == 0.0 || u[i] * u[i + 1] < 0.0) {
                cut = i;
                break;
            }
        }
        if (cut == 0) {
            throw NumericalError("compute_wavefunction: no node found above the inner cutoff; lower r_floor");
        }
        const double r0 = r[cut];
        const double r1 = r[cut + 1];
        truncation_radius = r0 + (r1 - r0) * u[cut] / (u[cut] - u[cut + 1]);
        std::fill(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(cut) + 1, 0.0);
    }
    else {
        truncation_radius = 0.0;
    }

    const double norm2 = [&] {
        std::vector<double> u2(count);
        for (std::size_t i = 0; i < count; ++i) {
            u2[i] = u[i] * u[i];
        }
        return integrate_sqrt_mesh(u2, h);
    }();
    const double scale = 1.0 / std::sqrt(norm2);
    for (double& v : u) {
        v *= scale;
    }

    int nodes = 0;
    double prev = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        if (u[i] == 0.0) {
            continue;
        }
        if (prev != 0.0 && prev * u[i] < 0.0) {
            ++nodes;
        }
        prev = u[i];
    }
    const int expected = expected_node_count(state);
    if (nodes != expected) {
        throw NumericalError("compute_wavefunction: node count mismatch for n = " + std::to_string(n) +
                             " (expected " + std::to_string(expected) + ", found " + std::to_string(nodes) +
                             "); grid too coarse");
    }

    return RadialWavefunction(state, h, std::move(r), std::move(u), nodes, truncation_radius, model.source);
}

double probability_density_s(const RadialWavefunction& wf, double radius)
{
    if (!(radius > 0.0 && radius <= wf.r_max())) {
        throw InputError("probability_density_s: R outside (0, r_max] of the wavefunction grid");
    }
    const double w = wf.u_at(radius) / radius;
    return w * w / (4.0 * std::numbers::pi);
}

double outermost_antinode(const RadialWavefunction& wf)
{
    const auto& u = wf.u();
    const auto& r = wf.r();
    std::size_t best = 0;
    double best_val = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] * u[i] > best_val) {
            best_val = u[i] * u[i];
            best = i;
        }
    }
    // The outermost lobe carries the largest amplitude; walk to its maximum.
    std::size_t i = u.size() - 2;
    while (i > 1 && !(std::abs(u[i]) >= std::abs(u[i - 1]) && std::abs(u[i]) >= std::abs(u[i + 1]) &&
                      u[i] * u[i] > 1e-3 * best_val)) {
        --i;
    }
    if (i <= 1) {
        i = best;
    }
    // Root of du/dr between the neighbouring knots.
    double lo = r[i - 1];
    double hi = r[i + 1];
    double flo = wf.du_dr_at(lo) * u[i];
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = wf.du_dr_at(mid) * u[i];
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        }
        else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace rydmol
