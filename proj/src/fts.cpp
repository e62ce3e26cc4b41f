#include "lrd/fts.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "lrd/errors.hpp"

namespace lrd {

void validate_series(const FunctionalSeries& fs) {
    validate_grid(fs.grid);
    if (fs.values.cols() != fs.grid.size())
        throw std::invalid_argument("functional series: value columns must match grid size");
    if (fs.values.rows() < 2)
        throw std::invalid_argument("functional series: need at least 2 curves");
    if (!fs.values.allFinite())
        throw std::invalid_argument("functional series: non-finite values");
}

Eigen::VectorXd sample_mean(const FunctionalSeries& fs) {
    validate_series(fs);
    return fs.values.colwise().mean();
}

namespace {

Eigen::MatrixXd centered_values(const FunctionalSeries& fs) {
    Eigen::MatrixXd c = fs.values;
    c.rowwise() -= fs.values.colwise().mean();
    return c;
}

/// (1/n) * Xc^T T Xc where T is the banded Toeplitz matrix T_{s,t} = w(|t-s|)
/// for |t-s| <= max_lag.  This is the shared evaluation of every weighted sum
/// of autocovariance surfaces; the result is symmetrized exactly.
Eigen::MatrixXd weighted_lag_sum(const Eigen::MatrixXd& centered, int max_lag,
                                 const std::function<double(int)>& weight) {
    const int n = static_cast<int>(centered.rows());
    const int W = static_cast<int>(centered.cols());
    Eigen::MatrixXd banded = Eigen::MatrixXd::Zero(n, W);
    for (int s = 0; s < n; ++s) {
        const int lo = std::max(0, s - max_lag);
        const int hi = std::min(n - 1, s + max_lag);
        for (int t = lo; t <= hi; ++t) {
            const double w = weight(std::abs(t - s));
            if (w != 0.0) banded.row(s) += w * centered.row(t);
        }
    }
    Eigen::MatrixXd m = (centered.transpose() * banded) / static_cast<double>(n);
    m = 0.5 * (m + m.transpose()).eval();
    return m;
}

}  // namespace

CovSurface autocov_surface(const FunctionalSeries& fs, int lag) {
    validate_series(fs);
    const int n = fs.n();
    if (std::abs(lag) > n - 1)
        throw std::out_of_range("autocov_surface: |lag| must be at most n-1");
    const Eigen::MatrixXd c = centered_values(fs);
    const int l = std::abs(lag);
    Eigen::MatrixXd g =
        (c.topRows(n - l).transpose() * c.bottomRows(n - l)) / static_cast<double>(n);
    if (lag < 0) g.transposeInPlace();  // gamma_{-l}(omega, nu) = gamma_l(nu, omega)
    if (lag == 0) g = 0.5 * (g + g.transpose()).eval();
    return CovSurface{fs.grid, std::move(g)};
}

CovSurface lrc_lag_weighted(const FunctionalSeries& fs, bool normalized, double alpha) {
    validate_series(fs);
    const int n = fs.n();
    if (normalized && (alpha <= 0.0 || alpha > 1.5))
        throw std::invalid_argument("lrc_lag_weighted: alpha must be in (0, 3/2]");
    const int max_lag = std::min(n - 1, fs.W());
    const Eigen::MatrixXd c = centered_values(fs);
    Eigen::MatrixXd m = weighted_lag_sum(
        c, max_lag, [n](int l) { return static_cast<double>(n - l); });
    if (normalized) m *= std::pow(static_cast<double>(n), -(3.0 - 2.0 * alpha));
    return CovSurface{fs.grid, std::move(m)};
}

CovSurface lrc_kernel(const FunctionalSeries& fs, const KernelSpec& kernel, double h) {
    validate_series(fs);
    if (!(h > 0.0)) throw std::invalid_argument("lrc_kernel: bandwidth h must be positive");
    const int n = fs.n();
    // widest lag with a nonzero window value
    int max_lag = 0;
    for (int l = n - 1; l >= 1; --l) {
        if (kernel.weight(l / h) != 0.0) {
            max_lag = l;
            break;
        }
    }
    const Eigen::MatrixXd c = centered_values(fs);
    Eigen::MatrixXd m = weighted_lag_sum(
        c, max_lag, [&kernel, h](int l) { return kernel.weight(l / h); });
    return CovSurface{fs.grid, std::move(m)};
}

namespace {

double surface_norm_sq(const Grid& grid, const Eigen::MatrixXd& m) {
    double acc = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            acc += grid.weights[i] * grid.weights[j] * m(i, j) * m(i, j);
    return acc;
}

double diag_integral(const Grid& grid, const Eigen::MatrixXd& m) {
    double acc = 0.0;
    for (int i = 0; i < m.rows(); ++i) acc += grid.weights[i] * m(i, i);
    return acc;
}

}  // namespace

double plugin_bandwidth(const FunctionalSeries& fs, const KernelSpec& initial,
                        const KernelSpec& final_kernel, double h1, PluginDiagnostics* diag) {
    validate_series(fs);
    const int n = fs.n();
    if (final_kernel.order == KernelSpec::infinite_order || !std::isfinite(final_kernel.w_const))
        throw std::invalid_argument("plugin_bandwidth: final kernel needs a finite order and w");
    if (h1 <= 0.0) h1 = std::pow(static_cast<double>(n), 0.2);
    const int q = final_kernel.order;

    int max_lag = 0;
    for (int l = n - 1; l >= 1; --l) {
        if (initial.weight(l / h1) != 0.0) {
            max_lag = l;
            break;
        }
    }
    const Eigen::MatrixXd c = centered_values(fs);
    const Eigen::MatrixXd pilot0 = weighted_lag_sum(
        c, max_lag, [&initial, h1](int l) { return initial.weight(l / h1); });
    const Eigen::MatrixXd pilotq = weighted_lag_sum(
        c, max_lag, [&initial, h1, q](int l) {
            return initial.weight(l / h1) * std::pow(static_cast<double>(l), q);
        });

    const double norm0_sq = surface_norm_sq(fs.grid, pilot0);
    const double diag0 = diag_integral(fs.grid, pilot0);
    const double normq_sq = surface_norm_sq(fs.grid, pilotq);
    const double denom = (norm0_sq + diag0 * diag0) * initial.l2_const;
    if (denom <= 0.0)
        throw EstimationError("plugin_bandwidth: degenerate series (no variance)");

    const double w = final_kernel.w_const;
    const double expo = 1.0 / (1.0 + 2.0 * q);
    const double c0 = std::pow(2.0 * q * w * w * normq_sq, expo) * std::pow(denom, -expo);
    const double h_opt = c0 * std::pow(static_cast<double>(n), expo);
    if (!std::isfinite(h_opt) || h_opt <= 0.0)
        throw EstimationError("plugin_bandwidth: degenerate pilot estimates");
    if (diag) *diag = PluginDiagnostics{h1, c0, h_opt};
    return h_opt;
}

EigenSystem eigendecompose(const CovSurface& surface, int J) {
    validate_grid(surface.grid);
    const int W = surface.grid.size();
    if (surface.values.rows() != W || surface.values.cols() != W)
        throw std::invalid_argument("eigendecompose: surface shape must match grid");
    if (J < 1 || J > W) throw std::invalid_argument("eigendecompose: J must be in [1, W]");
    const Eigen::MatrixXd& m = surface.values;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale)
        throw std::invalid_argument("eigendecompose: surface is not symmetric");

    Eigen::VectorXd sqw(W);
    for (int i = 0; i < W; ++i) sqw[i] = std::sqrt(surface.grid.weights[i]);
    const Eigen::MatrixXd a = sqw.asDiagonal() * m * sqw.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success)
        throw EstimationError("eigendecompose: eigensolver failed");

    EigenSystem out;
    out.eigenvalues.resize(J);
    out.eigenfunctions.resize(J, W);
    for (int j = 0; j < J; ++j) {
        const int src = W - 1 - j;  // solver sorts ascending
        out.eigenvalues[j] = solver.eigenvalues()[src];
        Eigen::VectorXd phi = solver.eigenvectors().col(src).cwiseQuotient(sqw);
        int imax = 0;
        for (int i = 1; i < W; ++i)
            if (std::abs(phi[i]) > std::abs(phi[imax])) imax = i;
        if (phi[imax] < 0.0) phi = -phi;
        out.eigenfunctions.row(j) = phi.transpose();
    }
    // Constant curves center to exact zeros, so a dead surface is exactly zero.
    out.degenerate = m.cwiseAbs().maxCoeff() == 0.0;
    return out;
}

ScoreSeries extract_scores(const FunctionalSeries& fs, const EigenSystem& eigensys, int j) {
    validate_series(fs);
    if (j < 1 || j > eigensys.eigenfunctions.rows())
        throw std::invalid_argument("extract_scores: component index out of range");
    if (eigensys.degenerate)
        throw EstimationError("extract_scores: degenerate surface (no variance)");
    const Eigen::MatrixXd c = centered_values(fs);
    Eigen::VectorXd wphi(fs.W());
    for (int i = 0; i < fs.W(); ++i)
        wphi[i] = fs.grid.weights[i] * eigensys.eigenfunctions(j - 1, i);
    const Eigen::VectorXd beta = c * wphi;
    ScoreSeries out;
    out.component_index = j;
    out.values.assign(beta.data(), beta.data() + beta.size());
    return out;
}

ScoreSeries dynamic_fpc_scores(const FunctionalSeries& fs, LrcMethod method,
                               PipelineDiagnostics* diag) {
    CovSurface lrc;
    if (method == LrcMethod::lag_weighted) {
        lrc = lrc_lag_weighted(fs, /*normalized=*/false);
    } else {
        PluginDiagnostics pd;
        const double h = plugin_bandwidth(fs, KernelSpec::flat_top(), KernelSpec::bartlett(),
                                          0.0, &pd);
        lrc = lrc_kernel(fs, KernelSpec::bartlett(), h);
        if (diag) diag->plugin = pd;
    }
    const EigenSystem es = eigendecompose(lrc, 1);
    if (diag) diag->leading_eigenvalue = es.eigenvalues[0];
    return extract_scores(fs, es, 1);
}

}  // namespace lrd
