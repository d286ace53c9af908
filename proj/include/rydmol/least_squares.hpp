#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rydmol {

/// Fills weighted residuals r_i = (model_i - y_i) / sigma_i for parameters p.
using ResidualFunction = std::function<void(std::span<const double> p, std::span<double> r)>;

struct LeastSquaresOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-10;  // on the scaled gradient
    double step_tolerance = 1e-12;      // relative parameter change
    double initial_lambda = 1e-3;
};

struct LeastSquaresResult {
    std::vector<double> params;
    std::vector<double> covariance;  // row-major (J^T J)^-1 at the solution
    double chi2 = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> trace;

    double cov(std::size_t i, std::size_t j) const { return covariance[i * params.size() + j]; }
};

/// Levenberg-Marquardt with a central-difference Jacobian.
LeastSquaresResult levenberg_marquardt(const ResidualFunction& residuals, std::size_t residual_count,
                                       std::vector<double> p0, const LeastSquaresOptions& options = {});

}  // namespace rydmol
