#pragma once

#include <cstddef>
#include <vector>

namespace rydmol {

/// Real symmetric tridiagonal matrix with selective eigen-decomposition:
/// Sturm-sequence bisection for eigenvalues, inverse iteration for vectors.
class SymmetricTridiagonal {
public:
    SymmetricTridiagonal(std::vector<double> diag, std::vector<double> off);

    std::size_t size() const { return diag_.size(); }

    /// Number of eigenvalues strictly below x.
    std::size_t count_below(double x) const;

    /// k-th smallest eigenvalue (0-based) inside the bracket [lo, hi]; bisection stops at
    /// abs_tol or at machine precision, whichever is larger.
    double eigenvalue(std::size_t k, double lo, double hi, double abs_tol = 0.0) const;

    /// Eigenvalues in [lo, hi), ascending, at most max_count of them.
    std::vector<double> eigenvalues_in(double lo, double hi, std::size_t max_count, double abs_tol = 0.0) const;

    /// Unit eigenvector for eigenvalue lambda, orthogonalised against `previous`.
    std::vector<double> eigenvector(double lambda, const std::vector<std::vector<double>>& previous = {}) const;

    /// x^T T x / x^T x.
    double rayleigh_quotient(const std::vector<double>& x) const;
    double norm_bound() const { return norm_; }

private:
    void count_below4(const double* x, std::size_t* counts) const;

    std::vector<double> diag_;
    std::vector<double> off_;
    double norm_ = 0.0;
    double pivmin_ = 0.0;
};

}  // namespace rydmol
