#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Normalised hydrogen u_{n0}(r) = r R_{n0}(r), positive near the origin.
inline double hydrogen_u(int n, double r)
{
    const double nn = static_cast<double>(n);
    const double norm = 2.0 / std::pow(nn, 2.5);
    return r * norm * std::exp(-r / nn) * std::assoc_laguerre(static_cast<unsigned>(n - 1), 1u, 2.0 * r / nn);
}

/// Bisection root of f on [a, b]; f(a) and f(b) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double a, double b, int iterations = 200)
{
    double fa = f(a);
    for (int i = 0; i < iterations; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        }
        else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Bound levels of the symmetric finite square well V = -depth on |x| < half_width,
/// from the even/odd matching conditions (energies relative to the continuum).
inline std::vector<double> finite_square_well_levels(double mu, double depth, double half_width)
{
    const double z0 = half_width * std::sqrt(2.0 * mu * depth);
    std::vector<double> z;
    // Even: z tan z = sqrt(z0^2 - z^2); odd: -z cot z = sqrt(z0^2 - z^2).
    for (int k = 0; k * std::numbers::pi / 2.0 < z0; ++k) {
        const double lo = k * std::numbers::pi / 2.0 + 1e-12;
        const double hi = std::min((k + 1) * std::numbers::pi / 2.0 - 1e-12, z0);
        auto f = [&](double t) {
            const double rhs = std::sqrt(std::max(0.0, z0 * z0 - t * t));
            return k % 2 == 0 ? t * std::sin(t) - rhs * std::cos(t) : -t * std::cos(t) - rhs * std::sin(t);
        };
        if ((f(lo) < 0.0) != (f(hi) < 0.0)) {
            z.push_back(bisect(f, lo, hi));
        }
    }
    std::vector<double> e;
    for (double t : z) {
        const double kappa = t / half_width;
        e.push_back(kappa * kappa / (2.0 * mu) - depth);
    }
    return e;
}

/// Small deterministic generator (SplitMix64) with Box-Muller normals and Knuth Poisson draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) / 9007199254740992.0; }

    double normal()
    {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double poisson(double mean)
    {
        if (mean > 30.0) {
            // Sum of independent Poisson pieces keeps the draw exact.
            const int pieces = static_cast<int>(std::ceil(mean / 30.0));
            double total = 0.0;
            for (int i = 0; i < pieces; ++i) {
                total += poisson(mean / pieces);
            }
            return total;
        }
        const double limit = std::exp(-mean);
        double p = 1.0;
        int k = -1;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k;
    }

private:
    std::uint64_t state_;
};

}  // namespace oracle
