#include <algorithm>
#include <cmath>

#include "rydmol/error.hpp"
#include "rydmol/spline.hpp"
#include "rydmol/vibrational.hpp"

namespace rydmol {

namespace {

struct UniformProblem {
    double step = 0.0;
    std::vector<double> v;
};

UniformProblem make_uniform(const PotentialCurve& potential, double requested_step)
{
    const auto& r = potential.r;
    double hmin = r.back() - r.front();
    double hmax = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        hmin = std::min(hmin, r[i] - r[i - 1]);
        hmax = std::max(hmax, r[i] - r[i - 1]);
    }
    UniformProblem p;
    if (requested_step <= 0.0 && hmax - hmin <= 1e-9 * hmax) {
        p.step = (r.back() - r.front()) / static_cast<double>(r.size() - 1);
        p.v = potential.v;
        return p;
    }
    const double step = requested_step > 0.0 ? requested_step : hmin;
    const std::size_t intervals = static_cast<std::size_t>(std::ceil((r.back() - r.front()) / step));
    p.step = (r.back() - r.front()) / static_cast<double>(intervals);
    const CubicSpline spline(r, potential.v);
    p.v.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double x = std::min(r.front() + p.step * static_cast<double>(i), r.back());
        p.v[i] = spline(x);
    }
    return p;
}

// Sign changes of the outward Numerov solution started with chi(R_0) = 0; equals the
// number of Dirichlet eigenvalues below e.
std::size_t count_nodes(const UniformProblem& p, double mu, double e)
{
    const std::size_t n = p.v.size();
    const double h2 = p.step * p.step / 12.0;
    auto f = [&](std::size_t i) { return 1.0 + h2 * 2.0 * mu * (e - p.v[i]); };
    double prev = 0.0;
    double cur = 1e-20;
    double f_prev = f(0);
    double f_cur = f(1);
    std::size_t nodes = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double f_next = f(i + 1);
        const double next = ((12.0 - 10.0 * f_cur) * cur - f_prev * prev) / f_next;
        if ((next < 0.0 && cur > 0.0) || (next > 0.0 && cur < 0.0) || (next == 0.0 && cur != 0.0)) {
            ++nodes;
        }
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) {
            prev *= 1e-150;
            cur *= 1e-150;
        }
        f_prev = f_cur;
        f_cur = f_next;
    }
    return nodes;
}

}  // namespace

std::vector<double> shoot_eigenvalues(const PotentialCurve& potential, double mu, EnergyWindow window,
                                      std::size_t max_levels, const ShootingOptions& options)
{
    potential.validate();
    if (!(mu > 0.0)) {
        throw InputError("shoot_eigenvalues: mu must be positive");
    }
    std::vector<double> out;
    if (!(window.hi > window.lo)) {
        return out;
    }
    const UniformProblem p = make_uniform(potential, options.step);
    const std::size_t first = count_nodes(p, mu, window.lo);
    const std::size_t last = std::min(count_nodes(p, mu, window.hi), first + max_levels);
    for (std::size_t k = first; k < last; ++k) {
        double lo = window.lo;
        double hi = window.hi;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi || hi - lo <= 1e-15 * std::max(std::abs(lo), std::abs(hi))) {
                break;
            }
            if (count_nodes(p, mu, mid) > k) {
                hi = mid;
            }
            else {
                lo = mid;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

}  // namespace rydmol
