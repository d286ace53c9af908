#include "rydmol/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "rydmol/error.hpp"

namespace rydmol {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void normalize(std::vector<double>& v)
{
    const double s = std::sqrt(dot(v, v));
    for (double& x : v) {
        x /= s;
    }
}

}  // namespace

SymmetricTridiagonal::SymmetricTridiagonal(std::vector<double> diag, std::vector<double> off)
    : diag_(std::move(diag)), off_(std::move(off))
{
    if (diag_.empty() || off_.size() + 1 != diag_.size()) {
        throw InputError("SymmetricTridiagonal: off-diagonal must have size n - 1");
    }
    double max_off2 = 0.0;
    for (std::size_t i = 0; i < diag_.size(); ++i) {
        const double left = i > 0 ? std::abs(off_[i - 1]) : 0.0;
        const double right = i < off_.size() ? std::abs(off_[i]) : 0.0;
        norm_ = std::max(norm_, std::abs(diag_[i]) + left + right);
        if (i < off_.size()) {
            max_off2 = std::max(max_off2, off_[i] * off_[i]);
        }
    }
    pivmin_ = std::numeric_limits<double>::min() * std::max(1.0, max_off2);
}

std::size_t SymmetricTridiagonal::count_below(double x) const
{
    std::size_t count = 0;
    double q = diag_[0] - x;
    if (std::abs(q) < pivmin_) {
        q = -pivmin_;
    }
    if (q < 0.0) {
        ++count;
    }
    for (std::size_t i = 1; i < diag_.size(); ++i) {
        q = diag_[i] - x - off_[i - 1] * off_[i - 1] / q;
        if (std::abs(q) < pivmin_) {
            q = -pivmin_;
        }
        if (q < 0.0) {
            ++count;
        }
    }
    return count;
}

void SymmetricTridiagonal::count_below4(const double* x, std::size_t* counts) const
{
    // Four independent Sturm chains interleaved: the divisions overlap in the pipeline.
    double q[4];
    for (int s = 0; s < 4; ++s) {
        q[s] = diag_[0] - x[s];
        if (std::abs(q[s]) < pivmin_) {
            q[s] = -pivmin_;
        }
        counts[s] = q[s] < 0.0 ? 1 : 0;
    }
    for (std::size_t i = 1; i < diag_.size(); ++i) {
        const double e2 = off_[i - 1] * off_[i - 1];
        for (int s = 0; s < 4; ++s) {
            q[s] = diag_[i] - x[s] - e2 / q[s];
            if (std::abs(q[s]) < pivmin_) {
                q[s] = -pivmin_;
            }
            counts[s] += q[s] < 0.0 ? 1 : 0;
        }
    }
}

double SymmetricTridiagonal::eigenvalue(std::size_t k, double lo, double hi, double abs_tol) const
{
    // Multisection: four interior probes shrink the bracket fivefold per sweep.
    for (int iter = 0; iter < 200; ++iter) {
        const double width = hi - lo;
        if (width <= std::max(abs_tol, 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + pivmin_)) {
            break;
        }
        double x[4];
        std::size_t c[4];
        for (int s = 0; s < 4; ++s) {
            x[s] = lo + width * (s + 1) / 5.0;
        }
        count_below4(x, c);
        double new_lo = lo;
        double new_hi = hi;
        for (int s = 0; s < 4; ++s) {
            if (c[s] > k) {
                new_hi = x[s];
                break;
            }
            new_lo = x[s];
        }
        if (new_lo == lo && new_hi == hi) {
            break;
        }
        lo = new_lo;
        hi = new_hi;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> SymmetricTridiagonal::eigenvalues_in(double lo, double hi, std::size_t max_count,
                                                         double abs_tol) const
{
    std::vector<double> out;
    if (!(hi > lo)) {
        return out;
    }
    const std::size_t first = count_below(lo);
    const std::size_t last = std::min(count_below(hi), first + max_count);
    double floor = lo;
    for (std::size_t k = first; k < last; ++k) {
        out.push_back(eigenvalue(k, floor, hi, abs_tol));
        floor = std::max(lo, out.back() - 2.0 * abs_tol);
    }
    return out;
}

double SymmetricTridiagonal::rayleigh_quotient(const std::vector<double>& x) const
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < diag_.size(); ++i) {
        double tx = diag_[i] * x[i];
        if (i > 0) {
            tx += off_[i - 1] * x[i - 1];
        }
        if (i < off_.size()) {
            tx += off_[i] * x[i + 1];
        }
        num += x[i] * tx;
        den += x[i] * x[i];
    }
    return num / den;
}

std::vector<double> SymmetricTridiagonal::eigenvector(double lambda,
                                                      const std::vector<std::vector<double>>& previous) const
{
    const std::size_t n = diag_.size();
    if (n == 1) {
        return {1.0};
    }
    // LU factorisation of T - lambda I with partial pivoting.
    std::vector<double> dl(off_);
    std::vector<double> d(n);
    std::vector<double> du(off_);
    std::vector<double> du2(n > 2 ? n - 2 : 0, 0.0);
    std::vector<char> swapped(n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = diag_[i] - lambda;
    }
    const double tiny = kEps * std::max(norm_, pivmin_);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) {
                d[i] = tiny;
            }
            const double fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        }
        else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            const double temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = 1;
        }
    }
    if (d[n - 1] == 0.0) {
        d[n - 1] = tiny;
    }
    std::vector<double> inv_d(n);
    for (std::size_t i = 0; i < n; ++i) {
        inv_d[i] = 1.0 / d[i];
    }

    auto solve = [&](std::vector<double>& b) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            }
            else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        b[n - 1] *= inv_d[n - 1];
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) * inv_d[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) * inv_d[i];
        }
    };

    std::vector<double> x(n);
    // Deterministic pseudo-random start vector with components along every eigenvector.
    std::uint32_t state = 12345u;
    for (std::size_t i = 0; i < n; ++i) {
        state = state * 1664525u + 1013904223u;
        x[i] = 0.5 + static_cast<double>(state >> 8) / 16777216.0;
    }
    for (int iter = 0; iter < 3; ++iter) {
        for (const auto& p : previous) {
            const double c = dot(x, p);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] -= c * p[i];
            }
        }
        normalize(x);
        solve(x);
        normalize(x);
    }
    for (const auto& p : previous) {
        const double c = dot(x, p);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] -= c * p[i];
        }
    }
    normalize(x);
    return x;
}

}  // namespace rydmol
