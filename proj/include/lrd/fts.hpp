#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lrd/grid.hpp"
#include "lrd/kernels.hpp"

namespace lrd {

/// n curves sampled on a shared grid; row t holds curve t.
struct FunctionalSeries {
    Grid grid;
    Eigen::MatrixXd values;  // n x W

    int n() const { return static_cast<int>(values.rows()); }
    int W() const { return static_cast<int>(values.cols()); }
};

void validate_series(const FunctionalSeries& fs);

/// Discretized covariance-type surface on grid x grid.
struct CovSurface {
    Grid grid;
    Eigen::MatrixXd values;  // W x W
};

/// Top-J eigenpairs of a quadrature-weighted surface operator.  Rows of
/// `eigenfunctions` are orthonormal under the grid quadrature.  `degenerate`
/// is set when the surface carries no variance (all eigenvalues ~ 0).
struct EigenSystem {
    std::vector<double> eigenvalues;   // nonincreasing
    Eigen::MatrixXd eigenfunctions;    // J x W
    bool degenerate = false;
};

/// Projection scores of the centered curves on one eigenfunction.
struct ScoreSeries {
    std::vector<double> values;
    int component_index = 1;
};

Eigen::VectorXd sample_mean(const FunctionalSeries& fs);

/// Lag-l sample autocovariance surface gamma_l(omega, nu), 1/n normalization,
/// centered at the sample mean.  Requires |l| <= n-1.
CovSurface autocov_surface(const FunctionalSeries& fs, int lag);

/// Lag-weighted long-run covariance: sum over |l| <= min(n-1, W) of
/// (n - |l|) gamma_l.  With `normalized` the sum is scaled by n^{-(3-2*alpha)}
/// (alpha in (0, 3/2]); the unnormalized form is the score-extraction default
/// since the scale does not move the eigenfunctions.
CovSurface lrc_lag_weighted(const FunctionalSeries& fs, bool normalized = false,
                            double alpha = 1.0);

/// Kernel sandwich long-run covariance: sum of W_q(l/h) gamma_l over lags
/// with nonzero weight and |l| <= n-1.  h must be positive.
CovSurface lrc_kernel(const FunctionalSeries& fs, const KernelSpec& kernel, double h);

struct PluginDiagnostics {
    double h1 = 0.0;
    double c0 = 0.0;
    double h_opt = 0.0;
};

/// Three-step plug-in bandwidth for lrc_kernel: pilot surfaces under the
/// initial window at bandwidth h1 (default n^{1/5}), the c0 statistic, and
/// h_opt = c0 * n^{1/(1+2q)} for the final window of order q.
double plugin_bandwidth(const FunctionalSeries& fs,
                        const KernelSpec& initial = KernelSpec::flat_top(),
                        const KernelSpec& final_kernel = KernelSpec::bartlett(),
                        double h1 = 0.0, PluginDiagnostics* diag = nullptr);

/// Top-J eigenpairs of the quadrature-weighted operator induced by a
/// symmetric surface.  Decomposes D^{1/2} M D^{1/2}, maps the eigenvectors
/// back through D^{-1/2}, and fixes each sign so the largest-magnitude
/// coordinate is positive.
EigenSystem eigendecompose(const CovSurface& surface, int J);

/// Scores beta_{t,j} = <X_t - mean, phi_j> under grid quadrature (j 1-based).
ScoreSeries extract_scores(const FunctionalSeries& fs, const EigenSystem& eigensys, int j);

enum class LrcMethod { lag_weighted, kernel_plugin };

struct PipelineDiagnostics {
    PluginDiagnostics plugin;   // filled for kernel_plugin
    double leading_eigenvalue = 0.0;
};

/// Long-run covariance -> eigendecomposition -> first component scores.
ScoreSeries dynamic_fpc_scores(const FunctionalSeries& fs, LrcMethod method,
                               PipelineDiagnostics* diag = nullptr);

}  // namespace lrd
