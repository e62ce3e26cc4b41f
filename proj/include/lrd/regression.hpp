#pragma once

#include <span>
#include <vector>

namespace lrd::hurst {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Regression trace attached to estimator diagnostics.  xs/ys are the
/// log10 points actually fed to the fit.
struct RegressionPoints {
    std::vector<double> xs;
    std::vector<double> ys;
    double slope = 0.0;
    double intercept = 0.0;
    bool robust = false;

    bool empty() const { return xs.empty(); }
};

/// Least-squares line through (xs, ys); at least 3 points, abscissae not all
/// equal.  With robust=true, iteratively reweighted least squares with Huber
/// weights (tuning 1.345, at most 50 iterations, 1e-10 coefficient tolerance).
FitResult log_log_fit(std::span<const double> xs, std::span<const double> ys,
                      bool robust = false);

}  // namespace lrd::hurst
