#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "rydmol/error.hpp"
#include "rydmol/potential.hpp"
#include "rydmol/vibrational.hpp"

using namespace rydmol;

namespace {

const RadialWavefunction& rb_wavefunction(int n)
{
    static std::map<int, RadialWavefunction> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, compute_wavefunction(n, 0, QuantumDefectModel::rubidium_ns())).first;
    }
    return it->second;
}

}  // namespace

TEST_SUITE("potential")
{
    TEST_CASE("local momentum")
    {
        const double ns = 31.8687;
        CHECK(local_momentum(ns, 2.0 * ns * ns) == 0.0);
        CHECK(local_momentum(ns, 3.0 * ns * ns) == 0.0);
        CHECK(local_momentum(ns, 1900.0) == doctest::Approx(8.25e-3).epsilon(2e-3));
        double prev = local_momentum(ns, 1.0);
        for (double r = 2.0; r < 2.0 * ns * ns; r *= 1.3) {
            const double k = local_momentum(ns, r);
            CHECK(k < prev);
            prev = k;
        }
        CHECK_THROWS_AS(local_momentum(ns, 0.0), InputError);
        CHECK_THROWS_AS(local_momentum(ns, -5.0), InputError);
    }

    TEST_CASE("scattering length expansion")
    {
        const ScatteringModel m;
        CHECK(scattering_length(m, 0.0) == -18.5);
        CHECK(scattering_length(m, 8.25e-3) == doctest::Approx(-15.744).epsilon(1e-3));
        const double k0 = -3.0 * m.a_atom / (std::numbers::pi * m.alpha);
        CHECK(k0 == doctest::Approx(0.0554).epsilon(1e-3));
        CHECK(std::abs(scattering_length(m, k0)) < 1e-12);
        CHECK_THROWS_AS(scattering_length(m, -1.0), InputError);
    }

    TEST_CASE("a(k) table replaces the linear form")
    {
        ScatteringModel m;
        m.a_of_k_table = {{0.0, -10.0}, {0.1, 10.0}};
        CHECK(scattering_length(m, 0.05) == doctest::Approx(0.0));
        CHECK(scattering_length(m, 1.0) == 10.0);
        m.a_of_k_table = {{0.1, 0.0}, {0.0, 1.0}};
        CHECK_THROWS_AS(m.validate(), InputError);
    }

    TEST_CASE("scattering model bounds")
    {
        CHECK_THROWS_AS((ScatteringModel{-18.5, 0.0, {}}.validate()), InputError);
        CHECK_THROWS_AS((ScatteringModel{-150.0, 319.0, {}}.validate()), InputError);
        CHECK_NOTHROW((ScatteringModel{100.0, 319.0, {}}.validate()));
    }

    TEST_CASE("35S potential: sign structure, minimum and zero crossing")
    {
        const auto& wf = rb_wavefunction(35);
        const ScatteringModel m;
        const auto curve = build_potential(wf, m);
        CHECK_NOTHROW(curve.validate());
        CHECK(curve.r.front() >= 100.0);
        CHECK(curve.meta.n == 35);
        CHECK(curve.meta.mesh_id == wf.mesh_id());
        CHECK(curve.meta.momentum_n == doctest::Approx(wf.state().n_star));

        const auto it = std::min_element(curve.v.begin(), curve.v.end());
        const double r_min = curve.r[static_cast<std::size_t>(it - curve.v.begin())];
        CHECK(r_min == doctest::Approx(1900.0).epsilon(0.05));

        // Direct oracle: V = a(k) u^2 / (2 R^2) at every grid point.
        const double ns = wf.state().n_star;
        for (std::size_t i = 0; i < curve.r.size(); i += 97) {
            const double r = curve.r[i];
            const double k = std::sqrt(std::max(0.0, 2.0 / r - 1.0 / (ns * ns)));
            const double a = -18.5 + std::numbers::pi / 3.0 * 319.0 * k;
            const double u = wf.u_at(r);
            CHECK(curve.v[i] == doctest::Approx(a * u * u / (2.0 * r * r)).epsilon(1e-9));
        }

        // Sign: negative beyond the a(k) root wherever the density is non-negligible.
        const double r0 = *scattering_zero_radius(m, ns);
        CHECK(r0 == doctest::Approx(500.0).epsilon(0.1));
        for (std::size_t i = 0; i < curve.r.size(); ++i) {
            if (std::abs(curve.v[i]) < 1e-30) {
                continue;
            }
            CHECK((curve.v[i] < 0.0) == (curve.r[i] > r0));
        }

        // Asymptotic decay at the outer grid end.
        CHECK(std::abs(curve.v.back()) < 1e-3 * std::abs(curve.min_value()));
    }

    TEST_CASE("linearity in a_atom")
    {
        const auto& wf = rb_wavefunction(35);
        const double x = -7.0;
        const auto v1 = build_potential(wf, ScatteringModel{x, 319.0, {}});
        const auto v2 = build_potential(wf, ScatteringModel{2.0 * x, 319.0, {}});
        for (std::size_t i = 0; i < v1.r.size(); i += 51) {
            const double r = v1.r[i];
            const double psi2 = probability_density_s(wf, r);
            const double expected = 2.0 * std::numbers::pi * x * psi2;
            CHECK(v2.v[i] - v1.v[i] == doctest::Approx(expected).epsilon(1e-8).scale(1e-25));
        }
    }

    TEST_CASE("combine rejects mismatched meshes and names both")
    {
        const auto a = build_potential(rb_wavefunction(35), ScatteringModel{});
        const auto b = build_potential(rb_wavefunction(36), ScatteringModel{});
        try {
            combine(1.0, a, 1.0, b);
            FAIL("expected InputError");
        }
        catch (const InputError& e) {
            const std::string msg = e.what();
            CHECK(msg.find(a.meta.mesh_id) != std::string::npos);
            CHECK(msg.find(b.meta.mesh_id) != std::string::npos);
        }
    }

    TEST_CASE("outer-well depth decreases with n over 34..40")
    {
        double prev = -1.0;
        for (int n = 34; n <= 40; ++n) {
            const auto curve = build_potential(rb_wavefunction(n), ScatteringModel{});
            const double depth = -curve.min_value();
            if (prev > 0.0) {
                CHECK(depth < prev);
            }
            prev = depth;
        }
    }

    TEST_CASE("principal-n momentum option")
    {
        const auto& wf = rb_wavefunction(35);
        PotentialOptions opt;
        opt.momentum = MomentumQuantumNumber::principal;
        const auto curve = build_potential(wf, ScatteringModel{}, opt);
        CHECK(curve.meta.momentum_n == 35.0);
    }

    TEST_CASE("validity check")
    {
        const auto ok = validity_check(31.87, 319.0);
        CHECK(ok.ratio == doctest::Approx(1.5 * 31.87 * 31.87 / std::sqrt(319.0)));
        CHECK(ok.ratio == doctest::Approx(85.3).epsilon(2e-3));
        CHECK(ok.ok);
        const auto bad = validity_check(3.0, 319.0);
        CHECK(bad.ratio == doctest::Approx(0.756).epsilon(1e-3));
        CHECK_FALSE(bad.ok);
        CHECK(validity_check(31.87, 1e-12).ok);
    }
}
