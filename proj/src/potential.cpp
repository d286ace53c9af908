#include "rydmol/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rydmol/error.hpp"

namespace rydmol {

void ScatteringModel::validate() const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InputError("scattering model: alpha must be positive");
    }
    if (!(a_atom >= -100.0 && a_atom <= 100.0)) {
        throw InputError("scattering model: a_atom outside [-100, 100] bohr");
    }
    for (std::size_t i = 1; i < a_of_k_table.size(); ++i) {
        if (!(a_of_k_table[i].first > a_of_k_table[i - 1].first)) {
            throw InputError("scattering model: a(k) table must have strictly increasing k");
        }
    }
}

double local_momentum(double n_value, double radius)
{
    if (!(radius > 0.0)) {
        throw InputError("local_momentum: R must be positive");
    }
    const double k2 = 2.0 / radius - 1.0 / (n_value * n_value);
    return k2 > 0.0 ? std::sqrt(k2) : 0.0;
}

double scattering_length(const ScatteringModel& model, double k)
{
    if (!(k >= 0.0)) {
        throw InputError("scattering_length: k must be non-negative");
    }
    const auto& table = model.a_of_k_table;
    if (table.empty()) {
        return model.a_atom + std::numbers::pi / 3.0 * model.alpha * k;
    }
    if (k <= table.front().first) {
        return table.front().second;
    }
    if (k >= table.back().first) {
        return table.back().second;
    }
    auto it = std::lower_bound(table.begin(), table.end(), k,
                               [](const std::pair<double, double>& e, double key) { return e.first < key; });
    const auto& [k1, a1] = *it;
    const auto& [k0, a0] = *(it - 1);
    return a0 + (a1 - a0) * (k - k0) / (k1 - k0);
}

std::optional<double> scattering_zero_radius(const ScatteringModel& model, double n_value)
{
    if (!(model.a_atom < 0.0) || !(model.alpha > 0.0) || !(n_value > 0.0)) {
        return std::nullopt;
    }
    const double k0 = -3.0 * model.a_atom / (std::numbers::pi * model.alpha);
    return 2.0 / (k0 * k0 + 1.0 / (n_value * n_value));
}

void PotentialCurve::validate() const
{
    if (r.size() != v.size() || r.size() < 3) {
        throw InputError("potential curve: need >= 3 points and matching array lengths");
    }
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (!(r[i] > r[i - 1])) {
            throw InputError("potential curve: grid must be strictly increasing");
        }
    }
}

double PotentialCurve::min_value() const
{
    return *std::min_element(v.begin(), v.end());
}

PotentialCurve build_potential(const RadialWavefunction& wf, const ScatteringModel& model, double momentum_n,
                               const PotentialOptions& options)
{
    model.validate();
    if (!(momentum_n > 0.0)) {
        throw InputError("build_potential: momentum quantum number must be positive");
    }
    const auto& rs = wf.r();
    const auto& us = wf.u();
    PotentialCurve curve;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (rs[i] < options.r_min) {
            continue;
        }
        const double a = scattering_length(model, local_momentum(momentum_n, rs[i]));
        // 2 pi a |Psi|^2 with |Psi|^2 = u^2 / (4 pi R^2)
        curve.r.push_back(rs[i]);
        curve.v.push_back(a * us[i] * us[i] / (2.0 * rs[i] * rs[i]));
    }
    if (curve.r.size() < 3) {
        throw InputError("build_potential: r_min leaves fewer than 3 mesh points");
    }
    curve.meta.n = wf.state().n;
    curve.meta.n_star = wf.state().n_star;
    curve.meta.momentum_n = momentum_n;
    curve.meta.defect_source = wf.defect_source();
    curve.meta.mesh_id = wf.mesh_id();
    curve.meta.scattering = model;
    return curve;
}

PotentialCurve build_potential(const RadialWavefunction& wf, const ScatteringModel& model,
                               const PotentialOptions& options)
{
    const double momentum_n = options.momentum == MomentumQuantumNumber::effective
                                  ? wf.state().n_star
                                  : static_cast<double>(wf.state().n);
    return build_potential(wf, model, momentum_n, options);
}

PotentialCurve combine(double a, const PotentialCurve& lhs, double b, const PotentialCurve& rhs)
{
    if (lhs.meta.mesh_id != rhs.meta.mesh_id || lhs.r != rhs.r) {
        throw InputError("potential grids differ: '" + lhs.meta.mesh_id + "' vs '" + rhs.meta.mesh_id + "'");
    }
    PotentialCurve out = lhs;
    out.meta.scattering.reset();
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        out.v[i] = a * lhs.v[i] + b * rhs.v[i];
    }
    return out;
}

ValidityReport validity_check(double n_star, double alpha, double threshold)
{
    if (!(n_star > 0.0) || !(alpha >= 0.0)) {
        throw InputError("validity_check: inputs must be positive");
    }
    ValidityReport report;
    report.ratio = alpha > 0.0 ? 1.5 * n_star * n_star / std::sqrt(alpha) : std::numeric_limits<double>::infinity();
    report.ok = report.ratio >= threshold;
    return report;
}

}  // namespace rydmol
