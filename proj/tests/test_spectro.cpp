#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "rydmol/error.hpp"
#include "rydmol/least_squares.hpp"
#include "rydmol/spectro.hpp"

using namespace rydmol;

namespace {

double gauss(double x, double c, double fwhm)
{
    const double s = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    return std::exp(-0.5 * (x - c) * (x - c) / (s * s));
}

Spectrum synthetic_line(double center, double fwhm, double amp, double base, double noise, oracle::Rng* rng)
{
    Spectrum s;
    for (double x = -30.0; x <= -14.0 + 1e-9; x += 0.1) {
        s.detuning.push_back(x);
        const double y = base + amp * gauss(x, center, fwhm);
        s.signal.push_back(y + (rng ? noise * amp * rng->normal() : 0.0));
    }
    return s;
}

std::vector<StarkPoint> stark_series(double alpha, double c0, double sigma, oracle::Rng* rng)
{
    const PhysicalConstants pc;
    std::vector<StarkPoint> pts;
    for (double f = 0.0; f <= 1.4 + 1e-9; f += 0.1) {
        const double fau = f / pc.field_au_to_v_per_cm;
        const double c = c0 - 0.5 * alpha * fau * fau * pc.hartree_to_mhz;
        pts.push_back({f, c + (rng ? sigma * rng->normal() : 0.0), sigma});
    }
    return pts;
}

std::vector<DecayPoint> decay(double tau, double amp, double base, double t_max, int points, oracle::Rng* rng)
{
    std::vector<DecayPoint> d;
    for (int i = 0; i < points; ++i) {
        const double t = t_max * i / (points - 1);
        const double mean = amp * std::exp(-t / tau) + base;
        d.push_back({t, rng ? rng->poisson(mean) : mean});
    }
    return d;
}

}  // namespace

TEST_SUITE("spectro")
{
    TEST_CASE("levenberg-marquardt solves a nonlinear problem")
    {
        // Rosenbrock as residuals (1 - x, 10 (y - x^2)).
        const auto res = levenberg_marquardt(
            [](std::span<const double> p, std::span<double> r) {
                r[0] = 1.0 - p[0];
                r[1] = 10.0 * (p[1] - p[0] * p[0]);
            },
            2, {-1.2, 1.0});
        CHECK(res.converged);
        CHECK(res.params[0] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(res.params[1] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(res.chi2 < 1e-16);
    }

    TEST_CASE("noiseless gaussian line recovered exactly")
    {
        const auto s = synthetic_line(-22.0, 1.5, 100.0, 3.0, 0.0, nullptr);
        const auto f = fit_line(s, {-26.0, -18.0});
        CHECK(std::abs(f.center + 22.0) < 1e-6);
        CHECK(f.width == doctest::Approx(1.5).epsilon(1e-6));
        CHECK(f.amplitude == doctest::Approx(100.0).epsilon(1e-6));
        CHECK(f.baseline == doctest::Approx(3.0).epsilon(1e-6));
    }

    TEST_CASE("noisy gaussian line: 100-trial mean center within 3 sigma")
    {
        oracle::Rng rng(2024);
        std::vector<double> centers;
        for (int t = 0; t < 100; ++t) {
            const auto s = synthetic_line(-22.0, 1.5, 100.0, 3.0, 0.05, &rng);
            centers.push_back(fit_line(s, {-26.0, -18.0}).center);
        }
        const double mean = std::accumulate(centers.begin(), centers.end(), 0.0) / 100.0;
        double var = 0.0;
        for (double c : centers) {
            var += (c - mean) * (c - mean);
        }
        const double sd_mean = std::sqrt(var / 99.0) / 10.0;
        CHECK(std::abs(mean + 22.0) < 3.0 * sd_mean);
    }

    TEST_CASE("lorentzian shape")
    {
        Spectrum s;
        for (double x = -30.0; x <= -14.0; x += 0.1) {
            s.detuning.push_back(x);
            s.signal.push_back(2.0 + 50.0 * line_profile(LineShape::lorentzian, x, -21.0, 2.0));
        }
        const auto f = fit_line(s, {-28.0, -15.0}, LineShape::lorentzian);
        CHECK(f.center == doctest::Approx(-21.0).epsilon(1e-7));
        CHECK(f.width == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(line_profile(LineShape::gaussian, 0.0, 0.0, 1.0) == doctest::Approx(1.0));
        CHECK(line_profile(LineShape::lorentzian, 1.0, 0.0, 2.0) == doctest::Approx(0.5));
    }

    TEST_CASE("degenerate windows are rejected")
    {
        const auto s = synthetic_line(-22.0, 1.5, 100.0, 3.0, 0.0, nullptr);
        CHECK_THROWS_AS(fit_line(s, {-22.3, -22.0}), InputError);
        Spectrum flat = s;
        std::fill(flat.signal.begin(), flat.signal.end(), 5.0);
        CHECK_THROWS_AS(fit_line(flat, {-26.0, -18.0}), InputError);
        Spectrum bad = s;
        bad.detuning[3] = bad.detuning[2];
        CHECK_THROWS_AS(bad.validate(), InputError);
    }

    TEST_CASE("zeeman correction")
    {
        CHECK(zeeman_correction(0.0, 2.7) == 0.0);
        CHECK(zeeman_correction(0.8, 2.0) == doctest::Approx(2.0 * 1.39962449361 * 0.8));
        CHECK(zeeman_correction(0.8, 2.0) == doctest::Approx(2.24).epsilon(1e-3));
        CHECK(default_g_eff() == doctest::Approx(2.68).epsilon(1e-3));
        CHECK(zeeman_correction(0.8, default_g_eff()) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK_THROWS_AS(zeeman_correction(-1.0, 2.0), InputError);
    }

    TEST_CASE("binding energy")
    {
        LineFit atom;
        atom.center = 0.0;
        atom.sigma_center = 0.3;
        LineFit mol;
        mol.center = -23.4;
        mol.sigma_center = 0.4;
        const auto d = binding_energy(atom, mol, 0.0, 35, 0);
        CHECK(d.e_b == doctest::Approx(-23.4));
        CHECK(d.sigma == doctest::Approx(0.5));
        CHECK_FALSE(d.non_molecular);
        const auto swapped = binding_energy(mol, atom, 0.0);
        CHECK(swapped.e_b == -d.e_b);
        CHECK(swapped.non_molecular);
    }

    TEST_CASE("stark fit: exact recovery, offset invariance, rejection")
    {
        const auto pts = stark_series(1542e7, 0.0, 0.02, nullptr);
        const auto f = fit_stark(pts);
        CHECK(std::abs(f.alpha - 1542e7) / 1542e7 < 1e-3);
        CHECK(f.weighted);
        auto shifted = pts;
        for (auto& p : shifted) {
            p.center += 17.25;
        }
        const auto g = fit_stark(shifted);
        CHECK(std::abs(g.alpha - f.alpha) <= 1e-12 * std::abs(f.alpha));
        CHECK(g.zero_field_center == doctest::Approx(f.zero_field_center + 17.25).epsilon(1e-12));
        std::vector<StarkPoint> same(6, StarkPoint{0.5, -1.0, 0.1});
        CHECK_THROWS_AS(fit_stark(same), InputError);
        auto mixed = pts;
        mixed[0].sigma = 0.0;
        CHECK_THROWS_AS(fit_stark(mixed), InputError);
    }

    TEST_CASE("stark fit: reported sigma has 95 percent coverage")
    {
        oracle::Rng rng(99);
        int covered = 0;
        for (int t = 0; t < 100; ++t) {
            const auto f = fit_stark(stark_series(1524e7, -26.4, 0.02, &rng));
            covered += std::abs(f.alpha - 1524e7) <= 1.96 * f.sigma;
        }
        CHECK(covered >= 90);
    }

    TEST_CASE("lifetime: exact recovery and Poisson statistics")
    {
        const auto f = fit_lifetime(decay(65.0, 1000.0, 2.0, 250.0, 26, nullptr));
        CHECK(f.tau == doctest::Approx(65.0).epsilon(1e-6));
        oracle::Rng rng(5);
        std::vector<double> taus;
        int covered = 0;
        for (int t = 0; t < 100; ++t) {
            const auto g = fit_lifetime(decay(15.0, 90.0, 1.5, 60.0, 31, &rng));
            taus.push_back(g.tau);
            covered += std::abs(g.tau - 15.0) <= g.sigma;
        }
        const double mean = std::accumulate(taus.begin(), taus.end(), 0.0) / 100.0;
        CHECK(mean == doctest::Approx(15.0).epsilon(0.05));
        CHECK(covered >= 55);
        CHECK(covered <= 82);
    }

    TEST_CASE("lifetime: degenerate inputs")
    {
        CHECK_THROWS_AS(fit_lifetime(decay(15.0, 90.0, 1.5, 60.0, 4, nullptr)), InputError);
        std::vector<DecayPoint> flat;
        for (int i = 0; i < 10; ++i) {
            flat.push_back({double(i), 50.0 + (i % 2)});
        }
        CHECK_THROWS(fit_lifetime(flat));
        auto negative = decay(15.0, 90.0, 1.5, 60.0, 10, nullptr);
        negative[2].counts = -1.0;
        CHECK_THROWS_AS(fit_lifetime(negative), InputError);
    }
}
