#include "rydmol/least_squares.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "rydmol/error.hpp"

namespace rydmol {

namespace {

Eigen::VectorXd evaluate(const ResidualFunction& f, std::size_t m, const Eigen::VectorXd& p)
{
    Eigen::VectorXd r(static_cast<Eigen::Index>(m));
    f(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())),
      std::span<double>(r.data(), m));
    return r;
}

Eigen::MatrixXd jacobian(const ResidualFunction& f, std::size_t m, const Eigen::VectorXd& p)
{
    const Eigen::Index n = p.size();
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = 1e-6 * std::max(std::abs(p[j]), 1e-3);
        Eigen::VectorXd hi = p;
        Eigen::VectorXd lo = p;
        hi[j] += h;
        lo[j] -= h;
        jac.col(j) = (evaluate(f, m, hi) - evaluate(f, m, lo)) / (2.0 * h);
    }
    return jac;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const ResidualFunction& residuals, std::size_t residual_count,
                                       std::vector<double> p0, const LeastSquaresOptions& options)
{
    const std::size_t n = p0.size();
    if (n == 0 || residual_count < n) {
        throw InputError("levenberg_marquardt: need at least as many residuals as parameters");
    }
    Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(p0.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd r = evaluate(residuals, residual_count, p);
    double chi2 = r.squaredNorm();
    double lambda = options.initial_lambda;

    LeastSquaresResult result;
    Eigen::MatrixXd jac = jacobian(residuals, residual_count, p);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        result.iterations = iter + 1;
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        // Gradient scaled by parameter magnitude and curvature, so the test is unit-free.
        double gnorm = 0.0;
        for (Eigen::Index j = 0; j < grad.size(); ++j) {
            const double scale = std::sqrt(std::max(jtj(j, j), 1e-300)) * std::max(std::sqrt(chi2), 1e-300);
            gnorm = std::max(gnorm, std::abs(grad[j]) / scale);
        }
        result.gradient_norm = gnorm;
        if (gnorm < options.gradient_tolerance) {
            result.converged = true;
            break;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index j = 0; j < a.rows(); ++j) {
                a(j, j) += lambda * std::max(jtj(j, j), 1e-300);
            }
            const Eigen::VectorXd step = a.ldlt().solve(-grad);
            const Eigen::VectorXd trial = p + step;
            const Eigen::VectorXd r_trial = evaluate(residuals, residual_count, trial);
            const double chi2_trial = r_trial.squaredNorm();
            if (std::isfinite(chi2_trial) && chi2_trial <= chi2) {
                const double rel = step.norm() / std::max(p.norm(), 1e-300);
                p = trial;
                r = r_trial;
                const double improvement = chi2 - chi2_trial;
                chi2 = chi2_trial;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                if (rel < options.step_tolerance || improvement <= 1e-15 * chi2) {
                    result.converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        char line[160];
        std::snprintf(line, sizeof line, "iter %d chi2=%.9e lambda=%.3e grad=%.3e", iter + 1, chi2, lambda, gnorm);
        result.trace.emplace_back(line);
        if (!accepted) {
            // No downhill step at any damping: we sit at a (numerical) minimum.
            result.converged = gnorm < 1e-4;
            break;
        }
        jac = jacobian(residuals, residual_count, p);
        if (result.converged) {
            break;
        }
    }

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
    result.params.assign(p.data(), p.data() + n);
    result.covariance.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            result.covariance[i * n + j] = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    result.chi2 = chi2;
    return result;
}

}  // namespace rydmol
