// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rydmol/io.hpp"
#include "rydmol/molecular_model.hpp"
#include "rydmol/spectro.hpp"
#include "rydmol/vibrational.hpp"
#include "rydmol/wavefunction.hpp"

using namespace rydmol;
namespace fs = std::filesystem;

namespace {

const std::string kCli = RYDMOL_CLI_PATH;
const std::string kFixtures = RYDMOL_FIXTURE_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::require(bool ok, const char* fmt, ...)
{
    char buf[400];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    if (!detail.empty()) {
        detail += "; ";
    }
    detail += buf;
    if (!ok) {
        detail += " [x]";
        pass = false;
    }
}

bool within_rel(double value, double target, double rel)
{
    return std::abs(value - target) <= rel * std::abs(target);
}

double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

std::string fixture(const std::string& name)
{
    return kFixtures + "/" + name;
}

ModelSettings paper_settings()
{
    ModelSettings s;
    s.threads = 1;
    return s;
}

PotentialCurve tabulate(const std::vector<double>& r, const std::function<double(double)>& v)
{
    PotentialCurve c;
    c.r = r;
    for (double x : r) {
        c.v.push_back(v(x));
    }
    c.meta.mesh_id = "acceptance";
    return c;
}

SolverOptions plain_solver(std::size_t levels)
{
    SolverOptions o;
    o.max_levels = levels;
    o.refinement_check = false;
    return o;
}

Outcome binding_energies_35s()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto e = model_binding_energies({35}, ScatteringModel{-18.5, 319.0, {}}, paper_settings()).at(35);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(e.v0 && std::abs(e.v0->energy_mhz + 23.4) <= 2.0, "E(v=0) = %.3f MHz (target -23.4 +- 2)",
              e.v0 ? e.v0->energy_mhz : NAN);
    o.require(e.v1 && std::abs(e.v1->energy_mhz + 10.6) <= 2.0, "E(v=1) = %.3f MHz (target -10.6 +- 2)",
              e.v1 ? e.v1->energy_mhz : NAN);
    o.require(seconds < 60.0, "runtime %.2f s", seconds);
    return o;
}

Outcome outer_well_geometry()
{
    Outcome o;
    const auto settings = paper_settings();
    const BindingEnergyModel model(settings, {35, 40});
    const auto curve = model.potential(35, -18.5);
    const auto it = std::min_element(curve.v.begin(), curve.v.end());
    const double r_min = curve.r[static_cast<std::size_t>(it - curve.v.begin())];
    o.require(within_rel(r_min, 1900.0, 0.05), "n=35 potential minimum at %.1f bohr (1900 +- 5%%)", r_min);

    // a(k(R)) sign change located by bisection on the closed form, n* from the defect expansion.
    const auto& d = settings.defects;
    const double n0 = 35.0 - d.delta0;
    const double n_star = 35.0 - (d.delta0 + d.delta2 / (n0 * n0) + d.delta4 / std::pow(n0, 4));
    auto a_of_r = [&](double r) {
        const double k2 = 2.0 / r - 1.0 / (n_star * n_star);
        return -18.5 + std::numbers::pi / 3.0 * 319.0 * std::sqrt(std::max(0.0, k2));
    };
    const double r_zero = oracle::bisect(a_of_r, 10.0, 2.0 * n_star * n_star - 1.0);
    o.require(within_rel(r_zero, 500.0, 0.10), "a(k(R)) = 0 at %.1f bohr (500 +- 10%%)", r_zero);
    const auto lib_zero = scattering_zero_radius(ScatteringModel{-18.5, 319.0, {}}, curve.meta.momentum_n);
    o.require(lib_zero && std::abs(*lib_zero - r_zero) < 1e-6 * r_zero, "library zero %.3f bohr matches",
              lib_zero ? *lib_zero : NAN);

    const auto e40 = model.evaluate(40, -18.5);
    o.require(e40.v0 && within_rel(e40.v0->r_expect, 2556.0, 0.05), "n=40 v=0 <R> = %.1f bohr (2556 +- 5%%)",
              e40.v0 ? e40.v0->r_expect : NAN);
    return o;
}

Outcome scattering_length_recovery()
{
    Outcome o;
    const auto settings = paper_settings();
    const auto truth = model_binding_energies({34, 35, 36, 37, 38, 39, 40}, ScatteringModel{-18.5, 319.0, {}}, settings);
    oracle::Rng rng(185);
    std::vector<BindingEnergyDatum> data;
    for (const auto& [n, e] : truth) {
        for (int v : {0, 1}) {
            if (const auto level = e.e_mhz(v)) {
                data.push_back({n, v, *level + 0.3 * rng.normal(), 0.3, false});
            }
        }
    }
    ModelSettings fit_settings = settings;
    fit_settings.threads = 2;
    const auto synthetic = fit_scattering_length(data, fit_settings);
    o.require(std::abs(synthetic.a_best + 18.5) <= 0.2, "synthetic (%zu points, sigma 0.3 MHz): a_best = %.3f bohr",
              data.size(), synthetic.a_best);

    const auto fig3 = fit_scattering_length(parse_binding_energy_csv(fixture("fig3_binding_energies.csv")), fit_settings);
    o.require(fig3.a_best >= -19.5 && fig3.a_best <= -17.5, "fixture: a_best = %.3f bohr [%.3f, %.3f], chi2 = %.3f",
              fig3.a_best, fig3.a_lo, fig3.a_hi, fig3.chi2);
    return o;
}

Outcome binding_energy_trend()
{
    Outcome o;
    auto settings = paper_settings();
    settings.threads = 2;
    const auto e = model_binding_energies({34, 35, 36, 37, 38, 39, 40}, ScatteringModel{-18.5, 319.0, {}}, settings);
    double previous = INFINITY;
    std::string values;
    bool ok = true;
    for (const auto& [n, energies] : e) {
        const double mag = energies.v0 ? std::abs(energies.v0->energy_mhz) : NAN;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%.2f", values.empty() ? "" : " ", mag);
        values += buf;
        ok = ok && mag < previous;
        previous = mag;
    }
    o.require(ok, "|E(v=0)| for n=34..40: %s", values.c_str());
    return o;
}

Outcome rotational_constants()
{
    Outcome o;
    const auto e = model_binding_energies({35, 37}, ScatteringModel{-18.5, 319.0, {}}, paper_settings());
    const double b35 = e.at(35).v0 ? e.at(35).v0->b_rot_mhz * 1e3 : NAN;
    const double b37 = e.at(37).v0 ? e.at(37).v0->b_rot_mhz * 1e3 : NAN;
    o.require(within_rel(b35, 11.5, 0.10), "B(35S) = %.2f kHz (11.5 +- 10%%)", b35);
    o.require(within_rel(b37, 9.0, 0.10), "B(37S) = %.2f kHz (9.0 +- 10%%)", b37);
    return o;
}

Outcome solver_equivalence()
{
    Outcome o;
    {
        std::vector<double> grid(4001);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid[i] = -10.0 + 20.0 * static_cast<double>(i) / 4000.0;
        }
        const auto curve = tabulate(grid, [](double x) { return 0.5 * x * x; });
        const auto levels = solve_bound_states(curve, 1.0, EnergyWindow{0.0, 6.0}, plain_solver(6));
        const auto shot = shoot_eigenvalues(curve, 1.0, {0.0, 6.0}, 6);
        double worst_exact = 0.0;
        double worst_shot = 0.0;
        for (std::size_t k = 0; k < levels.size() && k < shot.size(); ++k) {
            worst_exact = std::max(worst_exact, rel_diff(levels[k].energy, k + 0.5));
            worst_shot = std::max(worst_shot, rel_diff(shot[k], levels[k].energy));
        }
        o.require(levels.size() == 6 && worst_exact <= 1e-4, "harmonic vs (v+1/2)w: %.2e", worst_exact);
        o.require(shot.size() == 6 && worst_shot <= 1e-3, "harmonic FD vs shooting: %.2e", worst_shot);
    }
    {
        const double h = 1e-3;
        std::vector<double> grid(20001);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid[i] = -10.0 + h / 2.0 + h * static_cast<double>(i);
        }
        const auto curve = tabulate(grid, [](double x) { return std::abs(x) < 1.0 ? -15.0 : 0.0; });
        const auto exact = oracle::finite_square_well_levels(1.0, 15.0, 1.0);
        const auto levels = solve_bound_states(curve, 1.0, std::nullopt, plain_solver(10));
        const auto shot = shoot_eigenvalues(curve, 1.0, {-15.0, 0.0}, 10);
        double worst_exact = 0.0;
        double worst_shot = 0.0;
        for (std::size_t k = 0; k < levels.size() && k < shot.size() && k < exact.size(); ++k) {
            worst_exact = std::max(worst_exact, rel_diff(levels[k].energy, exact[k]));
            worst_shot = std::max(worst_shot, rel_diff(shot[k], levels[k].energy));
        }
        const bool counts = levels.size() == exact.size() && shot.size() == exact.size();
        o.require(counts && worst_shot <= 1e-3, "square well (%zu levels) FD vs shooting: %.2e, vs analytic %.2e",
                  exact.size(), worst_shot, worst_exact);
    }
    {
        auto settings = paper_settings();
        settings.threads = 2;
        const BindingEnergyModel model(settings, {34, 35, 36, 37, 38, 39, 40});
        double worst = 0.0;
        bool counts = true;
        for (int n : model.n_values()) {
            const auto curve = model.potential(n, -18.5);
            const auto levels = model.levels(n, -18.5);
            const auto shot = shoot_eigenvalues(curve, settings.reduced_mass(), {curve.min_value(), 0.0}, levels.size());
            counts = counts && !levels.empty() && shot.size() == levels.size();
            for (std::size_t k = 0; k < levels.size() && k < shot.size(); ++k) {
                worst = std::max(worst, rel_diff(shot[k], levels[k].energy));
            }
        }
        o.require(counts && worst <= 1e-3, "molecular potentials n=34..40 FD vs shooting: %.2e", worst);
    }
    return o;
}

Outcome wavefunction_oracles()
{
    Outcome o;
    for (int n : {10, 20, 35}) {
        const auto wf = compute_wavefunction(n, 0, QuantumDefectModel::hydrogenic());
        double overlap = 0.0;
        for (std::size_t i = 0; i < wf.r().size(); ++i) {
            overlap += wf.u()[i] * oracle::hydrogen_u(n, wf.r()[i]);
        }
        const double sign = overlap < 0.0 ? -1.0 : 1.0;
        double num = 0.0;
        double den = 0.0;
        int exact_nodes = 0;
        double prev = 0.0;
        for (std::size_t i = 0; i < wf.r().size(); ++i) {
            const double exact = oracle::hydrogen_u(n, wf.r()[i]);
            num += (sign * wf.u()[i] - exact) * (sign * wf.u()[i] - exact);
            den += exact * exact;
            if (exact != 0.0) {
                exact_nodes += prev != 0.0 && (exact < 0.0) != (prev < 0.0);
                prev = exact;
            }
        }
        const double rms = std::sqrt(num / den);
        o.require(rms < 1e-4, "n=%d rms %.2e", n, rms);
        o.require(std::abs(wf.norm() - 1.0) <= 1e-6, "norm-1 %.1e", wf.norm() - 1.0);
        o.require(wf.nodes() == n - 1 && exact_nodes == n - 1, "nodes %d/%d", wf.nodes(), exact_nodes);
    }
    return o;
}

std::vector<StarkPoint> stark_series(double alpha, double c0, double sigma, oracle::Rng* rng)
{
    const PhysicalConstants pc;
    std::vector<StarkPoint> pts;
    for (int i = 0; i <= 14; ++i) {
        const double f = 0.1 * i;
        const double fau = f / pc.field_au_to_v_per_cm;
        const double c = c0 - 0.5 * alpha * fau * fau * pc.hartree_to_mhz;
        pts.push_back({f, c + (rng ? sigma * rng->normal() : 0.0), sigma});
    }
    return pts;
}

Outcome stark_fits()
{
    Outcome o;
    const auto exact = fit_stark(stark_series(1542e7, 0.0, 0.0, nullptr));
    o.require(rel_diff(exact.alpha, 1542e7) <= 1e-3, "noiseless rel err %.1e", rel_diff(exact.alpha, 1542e7));
    oracle::Rng rng(8);
    int covered = 0;
    for (int t = 0; t < 100; ++t) {
        const auto f = fit_stark(stark_series(1524e7, -26.4, 0.02, &rng));
        covered += std::abs(f.alpha - 1524e7) <= 1.96 * f.sigma;
    }
    o.require(covered >= 90, "95%% interval coverage %d/100", covered);
    const auto atom = fit_stark(parse_stark_csv(fixture("stark_atomic_35s.csv")));
    const auto mol = fit_stark(parse_stark_csv(fixture("stark_molecular_35s_v0.csv")));
    o.require(std::abs(atom.alpha - 1542e7) <= 7e7, "atom %.0f(%.0f)e7", atom.alpha / 1e7, atom.sigma / 1e7);
    o.require(std::abs(mol.alpha - 1524e7) <= 4e7, "molecule %.0f(%.0f)e7", mol.alpha / 1e7, mol.sigma / 1e7);
    return o;
}

Outcome lifetime_fits()
{
    Outcome o;
    // 30 shots per delay, about 3 counts per shot at t = 0.
    auto draw = [](oracle::Rng& rng) {
        std::vector<DecayPoint> d;
        for (int i = 0; i < 31; ++i) {
            const double t = 2.0 * i;
            d.push_back({t, rng.poisson(30.0 * (3.0 * std::exp(-t / 15.0) + 0.05))});
        }
        return d;
    };
    oracle::Rng rng(15);
    const auto single = fit_lifetime(draw(rng));
    o.require(std::abs(single.tau - 15.0) <= single.sigma, "tau = %.2f(%.2f) us", single.tau, single.sigma);
    int covered = 0;
    for (int t = 0; t < 100; ++t) {
        const auto f = fit_lifetime(draw(rng));
        covered += std::abs(f.tau - 15.0) <= f.sigma;
    }
    o.require(covered >= 55 && covered <= 82, "1-sigma coverage %d/100", covered);
    for (int n : {35, 36, 37}) {
        const auto atom = fit_lifetime(parse_decay_csv(fixture("decay_atom_" + std::to_string(n) + "s.csv")));
        const auto mol = fit_lifetime(parse_decay_csv(fixture("decay_molecule_" + std::to_string(n) + "s_v0.csv")));
        const double ratio = atom.tau / mol.tau;
        o.require(ratio >= 2.5 && ratio <= 4.5, "%dS ratio %.2f", n, ratio);
    }
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "rydmol_acceptance";
    fs::remove_all(root);
    std::vector<std::string> outputs;
    int status = 0;
    for (int threads : {1, 3}) {
        const fs::path out = root / ("t" + std::to_string(threads));
        const std::string cmd = "\"" + kCli + "\" fit-scattering-length --threads " + std::to_string(threads) +
                                " --format json --out \"" + out.string() + "\" --data \"" +
                                fixture("fig3_binding_energies.csv") + "\" > /dev/null";
        status |= std::system(cmd.c_str());
        outputs.push_back(slurp(out / "fit-scattering-length.json"));
    }
    o.require(status == 0, "exit status %d", status);
    o.require(!outputs[0].empty() && outputs[0] == outputs[1], "threads 1 vs 3: %zu bytes, identical = %s",
              outputs[0].size(), outputs[0] == outputs[1] ? "yes" : "no");
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"35S binding energies", binding_energies_35s},
        {"outer-well geometry", outer_well_geometry},
        {"scattering-length recovery", scattering_length_recovery},
        {"binding-energy trend", binding_energy_trend},
        {"rotational constants", rotational_constants},
        {"solver oracle equivalence", solver_equivalence},
        {"wavefunction oracles", wavefunction_oracles},
        {"stark fits", stark_fits},
        {"lifetime fits", lifetime_fits},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        }
        catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
