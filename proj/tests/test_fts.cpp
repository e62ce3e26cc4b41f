#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "lrd/csv.hpp"
#include "lrd/errors.hpp"
#include "lrd/fts.hpp"
#include "lrd/rng.hpp"
#include "oracles.hpp"

using namespace lrd;

namespace {

FunctionalSeries make_fs(int n, int W, std::uint64_t seed) {
    FunctionalSeries fs;
    fs.grid = uniform_grid(W);
    fs.values.resize(n, W);
    Rng rng(seed);
    for (int t = 0; t < n; ++t)
        for (int c = 0; c < W; ++c) fs.values(t, c) = rng.normal();
    return fs;
}

oracle::Matrix to_matrix(const Eigen::MatrixXd& m) {
    oracle::Matrix out(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

double max_abs_diff(const Eigen::MatrixXd& a, const oracle::Matrix& b) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b[i][j]));
    return worst;
}

}  // namespace

TEST_CASE("uniform grid invariants") {
    const Grid g = uniform_grid(11);
    CHECK(g.size() == 11);
    CHECK(g.points.front() == 0.0);
    CHECK(g.points.back() == 1.0);
    double sum = 0.0;
    for (double w : g.weights) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK_THROWS_AS(uniform_grid(1), std::invalid_argument);
}

TEST_CASE("sample_mean trivial and oracle cases") {
    FunctionalSeries fs;
    fs.grid = uniform_grid(5);
    fs.values.resize(2, 5);
    for (int c = 0; c < 5; ++c) {
        fs.values(0, c) = 3.25 + c;
        fs.values(1, c) = 3.25 + c;
    }
    const Eigen::VectorXd m = sample_mean(fs);
    for (int c = 0; c < 5; ++c) CHECK(m[c] == doctest::Approx(3.25 + c).epsilon(1e-15));

    fs.values.row(0).setZero();
    for (int c = 0; c < 5; ++c) fs.values(1, c) = 2.0;
    const Eigen::VectorXd m2 = sample_mean(fs);
    for (int c = 0; c < 5; ++c) CHECK(m2[c] == doctest::Approx(1.0).epsilon(1e-15));

    const FunctionalSeries r = make_fs(5, 11, 42);
    const std::vector<double> want = oracle::column_means(to_matrix(r.values));
    const Eigen::VectorXd got = sample_mean(r);
    for (int c = 0; c < 11; ++c) CHECK(got[c] == doctest::Approx(want[c]).epsilon(1e-14));
}

TEST_CASE("autocov_surface definition and lag bounds") {
    // centered series: lag-0 surface collapses to values^T values / n
    FunctionalSeries fs = make_fs(6, 4, 1);
    fs.values.rowwise() -= fs.values.colwise().mean().eval();
    const CovSurface g0 = autocov_surface(fs, 0);
    const Eigen::MatrixXd direct = fs.values.transpose() * fs.values / 6.0;
    CHECK((g0.values - direct).cwiseAbs().maxCoeff() <= 1e-13);

    CHECK_THROWS_AS(autocov_surface(fs, 6), std::out_of_range);
    CHECK_THROWS_AS(autocov_surface(fs, -6), std::out_of_range);

    const FunctionalSeries r = make_fs(4, 3, 7);
    const CovSurface g1 = autocov_surface(r, 1);
    CHECK(max_abs_diff(g1.values, oracle::autocov(to_matrix(r.values), 1)) <= 1e-14);

    // gamma_{-l}(omega, nu) = gamma_l(nu, omega) exactly
    const CovSurface gm1 = autocov_surface(r, -1);
    CHECK((gm1.values - g1.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lrc_lag_weighted matches the double-sum oracle") {
    const FunctionalSeries fs = make_fs(6, 3, 11);
    const int max_lag = std::min(6 - 1, 3);
    const auto want = oracle::weighted_cov_sum(to_matrix(fs.values), max_lag,
                                               [](int l) { return 6.0 - l; });
    const CovSurface got = lrc_lag_weighted(fs, false);
    CHECK(max_abs_diff(got.values, want) <= 1e-12);
}

TEST_CASE("lrc_lag_weighted normalization is an exact scale factor") {
    const FunctionalSeries fs = make_fs(12, 5, 3);
    const double alpha = 0.8;
    const CovSurface unnorm = lrc_lag_weighted(fs, false);
    const CovSurface norm = lrc_lag_weighted(fs, true, alpha);
    const double factor = std::pow(12.0, -(3.0 - 2.0 * alpha));
    CHECK((norm.values - factor * unnorm.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(lrc_lag_weighted(fs, true, 0.0), std::invalid_argument);
}

TEST_CASE("eigenfunctions invariant to the lag-weighted normalization") {
    const FunctionalSeries fs = make_fs(30, 7, 5);
    const EigenSystem a = eigendecompose(lrc_lag_weighted(fs, false), 3);
    const EigenSystem b = eigendecompose(lrc_lag_weighted(fs, true, 0.7), 3);
    CHECK((a.eigenfunctions - b.eigenfunctions).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("lrc_kernel support and oracle equality") {
    const FunctionalSeries fs = make_fs(6, 3, 19);
    // bartlett with h = 1 keeps only lag 0
    const CovSurface only0 = lrc_kernel(fs, KernelSpec::bartlett(), 1.0);
    const CovSurface g0 = autocov_surface(fs, 0);
    CHECK((only0.values - g0.values).cwiseAbs().maxCoeff() == 0.0);

    const KernelSpec bart = KernelSpec::bartlett();
    const auto want = oracle::weighted_cov_sum(to_matrix(fs.values), 2,
                                               [](int l) { return 1.0 - l / 3.0; });
    const CovSurface got = lrc_kernel(fs, bart, 3.0);
    CHECK(max_abs_diff(got.values, want) <= 1e-12);

    // flat-top with h = 2: lags 0 and +-1 enter with weight exactly 1
    const KernelSpec flat = KernelSpec::flat_top();
    CHECK(flat.weight(0.0) == 1.0);
    CHECK(flat.weight(0.5) == 1.0);
    CHECK(flat.weight(1.0) == 0.0);
    const auto want_flat = oracle::weighted_cov_sum(
        to_matrix(fs.values), 5, [&flat](int l) { return flat.weight(l / 2.0); });
    const CovSurface got_flat = lrc_kernel(fs, flat, 2.0);
    CHECK(max_abs_diff(got_flat.values, want_flat) <= 1e-12);

    CHECK_THROWS_AS(lrc_kernel(fs, bart, 0.0), std::invalid_argument);
}

TEST_CASE("kernel consistency: bartlett at h = n reproduces lag weighting") {
    for (int n : {6, 8}) {
        const FunctionalSeries fs = make_fs(n, 8, 100 + n);  // W >= n-1
        const CovSurface kern = lrc_kernel(fs, KernelSpec::bartlett(), static_cast<double>(n));
        const CovSurface lagw = lrc_lag_weighted(fs, false);
        CHECK((static_cast<double>(n) * kern.values - lagw.values).cwiseAbs().maxCoeff() <=
              1e-10 * lagw.values.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("kernel table constants") {
    CHECK(KernelSpec::bartlett().w_const == 1.0);
    CHECK(KernelSpec::bartlett().l2_const == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(KernelSpec::bartlett().order == 1);
    CHECK(KernelSpec::parzen().w_const == 6.0);
    CHECK(KernelSpec::parzen().l2_const == doctest::Approx(0.539285).epsilon(1e-12));
    CHECK(KernelSpec::tukey_hanning().w_const == doctest::Approx(M_PI * M_PI / 4));
    CHECK(KernelSpec::tukey_hanning().l2_const == doctest::Approx(0.75));
    CHECK(KernelSpec::quadratic_spectral().w_const ==
          doctest::Approx(18.0 * M_PI * M_PI / 125.0));
    CHECK(KernelSpec::quadratic_spectral().l2_const == 1.0);
    CHECK(KernelSpec::flat_top().l2_const == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(KernelSpec::flat_top().order == KernelSpec::infinite_order);

    // numerically confirm l2_const = integral of W^2 for every family
    for (const KernelSpec& k :
         {KernelSpec::bartlett(), KernelSpec::parzen(), KernelSpec::tukey_hanning(),
          KernelSpec::flat_top()}) {
        double integral = 0.0;
        const int steps = 200000;
        for (int i = 0; i < steps; ++i) {
            const double x = -1.0 + 2.0 * (i + 0.5) / steps;
            const double w = k.weight(x);
            integral += w * w * (2.0 / steps);
        }
        CHECK(integral == doctest::Approx(k.l2_const).epsilon(1e-4));
    }
}

TEST_CASE("plugin bandwidth: rate, constants, and the c0 oracle") {
    const FunctionalSeries fs = make_fs(8, 3, 23);
    PluginDiagnostics diag;
    const double h = plugin_bandwidth(fs, KernelSpec::flat_top(), KernelSpec::bartlett(), 0.0,
                                      &diag);
    // final bartlett has q = 1, so the rate is n^{1/3}
    CHECK(h == doctest::Approx(diag.c0 * std::cbrt(8.0)).epsilon(1e-12));
    CHECK(diag.h1 == doctest::Approx(std::pow(8.0, 0.2)).epsilon(1e-12));

    // term-by-term c0: pilot surfaces with |l|^p weights under the flat-top
    // window at h1, L2 surface norms under the quadrature
    const KernelSpec flat = KernelSpec::flat_top();
    const double h1 = diag.h1;
    const auto pilot0 = oracle::weighted_cov_sum(
        to_matrix(fs.values), 7, [&](int l) { return flat.weight(l / h1); });
    const auto pilot1 = oracle::weighted_cov_sum(
        to_matrix(fs.values), 7, [&](int l) { return flat.weight(l / h1) * l; });
    const double norm0 = oracle::surface_norm_sq(fs.grid.weights, pilot0);
    const double diag0 = oracle::diag_integral(fs.grid.weights, pilot0);
    const double norm1 = oracle::surface_norm_sq(fs.grid.weights, pilot1);
    const int q = 1;
    const double w = 1.0;
    const double c0 = std::pow(2.0 * q * w * w * norm1, 1.0 / 3.0) *
                      std::pow((norm0 + diag0 * diag0) * (4.0 / 3.0), -1.0 / 3.0);
    CHECK(diag.c0 == doctest::Approx(c0).epsilon(1e-10));

    CHECK_THROWS_AS(
        plugin_bandwidth(fs, KernelSpec::flat_top(), KernelSpec::flat_top(), 0.0, nullptr),
        std::invalid_argument);
}

TEST_CASE("plugin bandwidth rejects degenerate series") {
    FunctionalSeries fs;
    fs.grid = uniform_grid(4);
    fs.values = Eigen::MatrixXd::Constant(6, 4, 2.5);
    CHECK_THROWS_AS(plugin_bandwidth(fs), EstimationError);
}

TEST_CASE("eigendecompose: rank-1 surface") {
    const Grid g = uniform_grid(6);
    Eigen::VectorXd phi(6);
    for (int i = 0; i < 6; ++i) phi[i] = std::sin(1.0 + i);
    double norm = 0.0;
    for (int i = 0; i < 6; ++i) norm += g.weights[i] * phi[i] * phi[i];
    phi /= std::sqrt(norm);  // quadrature-normalized
    const double lambda = 2.75;
    CovSurface s{g, lambda * phi * phi.transpose()};
    const EigenSystem es = eigendecompose(s, 2);
    CHECK(es.eigenvalues[0] == doctest::Approx(lambda).epsilon(1e-12));
    CHECK(std::abs(es.eigenvalues[1]) <= 1e-10);
    // sign rule: largest-magnitude coordinate positive
    int imax = 0;
    for (int i = 1; i < 6; ++i)
        if (std::abs(phi[i]) > std::abs(phi[imax])) imax = i;
    const Eigen::VectorXd expect = phi[imax] > 0 ? phi : Eigen::VectorXd(-phi);
    CHECK((es.eigenfunctions.row(0).transpose() - expect).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("eigendecompose: reconstruction and orthonormality") {
    const FunctionalSeries fs = make_fs(20, 7, 31);
    const CovSurface s = lrc_lag_weighted(fs, false);
    const EigenSystem es = eigendecompose(s, 7);
    Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(7, 7);
    for (int j = 0; j < 7; ++j)
        rebuilt += es.eigenvalues[j] * es.eigenfunctions.row(j).transpose() *
                   es.eigenfunctions.row(j);
    CHECK((rebuilt - s.values).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, s.values.cwiseAbs().maxCoeff()));

    for (int i = 0; i < 7; ++i)
        for (int j = 0; j <= i; ++j) {
            std::vector<double> fi(7), fj(7);
            for (int c = 0; c < 7; ++c) {
                fi[c] = es.eigenfunctions(i, c);
                fj[c] = es.eigenfunctions(j, c);
            }
            const double ip = oracle::quad_inner(fs.grid.weights, fi, fj);
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-8);
        }
}

TEST_CASE("eigendecompose: 4x4 closed-form spectrum") {
    // quadrature-weighted operator chosen so D^{1/2} M D^{1/2} is the
    // tridiagonal Toeplitz matrix with eigenvalues 2 - 2 cos(k pi / 5)
    const Grid g = uniform_grid(4);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        t(i, i) = 2.0;
        if (i + 1 < 4) {
            t(i, i + 1) = -1.0;
            t(i + 1, i) = -1.0;
        }
    }
    Eigen::MatrixXd m(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = t(i, j) / std::sqrt(g.weights[i] * g.weights[j]);
    const EigenSystem es = eigendecompose(CovSurface{g, m}, 4);
    for (int j = 0; j < 4; ++j) {
        const int k = 4 - j;  // descending order
        const double want = 2.0 - 2.0 * std::cos(k * M_PI / 5.0);
        CHECK(es.eigenvalues[j] == doctest::Approx(want).epsilon(1e-12));
        Eigen::VectorXd v(4);
        for (int i = 0; i < 4; ++i) v[i] = std::sin((i + 1) * k * M_PI / 5.0);
        v /= v.norm();
        Eigen::VectorXd phi(4);
        for (int i = 0; i < 4; ++i) phi[i] = v[i] / std::sqrt(g.weights[i]);
        // the symmetric weights tie the two largest |coordinates|, so the
        // sign rule may resolve either way; compare up to overall sign
        const double diff =
            std::min((es.eigenfunctions.row(j).transpose() - phi).cwiseAbs().maxCoeff(),
                     (es.eigenfunctions.row(j).transpose() + phi).cwiseAbs().maxCoeff());
        CHECK(diff <= 1e-10);
    }
}

TEST_CASE("eigendecompose rejects asymmetry and bad J") {
    const Grid g = uniform_grid(3);
    Eigen::MatrixXd m(3, 3);
    m << 1, 2, 3, 0, 1, 2, 0, 0, 1;
    CHECK_THROWS_AS(eigendecompose(CovSurface{g, m}, 2), std::invalid_argument);
    CHECK_THROWS_AS(eigendecompose(CovSurface{g, Eigen::MatrixXd::Identity(3, 3)}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(eigendecompose(CovSurface{g, Eigen::MatrixXd::Identity(3, 3)}, 4),
                    std::invalid_argument);
}

TEST_CASE("gamma_0 surface is positive semidefinite") {
    const FunctionalSeries fs = make_fs(25, 6, 77);
    const EigenSystem es = eigendecompose(autocov_surface(fs, 0), 6);
    for (double lambda : es.eigenvalues) CHECK(lambda >= -1e-10);
}

TEST_CASE("long-run surfaces are symmetric to 1e-10") {
    const FunctionalSeries fs = make_fs(18, 5, 13);
    for (const CovSurface& s :
         {lrc_lag_weighted(fs, false), lrc_lag_weighted(fs, true, 1.0),
          lrc_kernel(fs, KernelSpec::parzen(), 4.0),
          lrc_kernel(fs, KernelSpec::quadratic_spectral(), 3.0)}) {
        CHECK((s.values - s.values.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("extract_scores: trivial, orthonormal and oracle cases") {
    const FunctionalSeries base = make_fs(15, 6, 47);
    const EigenSystem es = eigendecompose(lrc_lag_weighted(base, false), 2);

    // constant curves score zero against any component
    FunctionalSeries flat;
    flat.grid = base.grid;
    flat.values.resize(4, 6);
    for (int t = 0; t < 4; ++t)
        for (int c = 0; c < 6; ++c) flat.values(t, c) = 1.5 * (c + 1);
    for (double v : extract_scores(flat, es, 1).values) CHECK(std::abs(v) <= 1e-12);

    // rows = mean + a_t * phi_1 recover a_t through orthonormality
    FunctionalSeries synth;
    synth.grid = base.grid;
    synth.values.resize(5, 6);
    const std::vector<double> a = {0.3, -1.2, 2.0, -0.6, -0.5};  // sums to 0
    for (int t = 0; t < 5; ++t)
        for (int c = 0; c < 6; ++c)
            synth.values(t, c) = 4.0 + a[t] * es.eigenfunctions(0, c);
    const ScoreSeries sc = extract_scores(synth, es, 1);
    for (int t = 0; t < 5; ++t) CHECK(sc.values[t] == doctest::Approx(a[t]).epsilon(1e-10));

    // random series vs the quadrature loop oracle
    const ScoreSeries got = extract_scores(base, es, 2);
    const Eigen::VectorXd mean = sample_mean(base);
    for (int t = 0; t < base.n(); ++t) {
        std::vector<double> centered(6), phi(6);
        for (int c = 0; c < 6; ++c) {
            centered[c] = base.values(t, c) - mean[c];
            phi[c] = es.eigenfunctions(1, c);
        }
        CHECK(got.values[t] ==
              doctest::Approx(oracle::quad_inner(base.grid.weights, centered, phi))
                  .epsilon(1e-12));
    }

    // centering invariant: scores sum to ~0
    double sum = 0.0;
    for (double v : got.values) sum += v;
    CHECK(std::abs(sum) <= 1e-9 * base.n());

    CHECK_THROWS_AS(extract_scores(base, es, 3), std::invalid_argument);
}

TEST_CASE("degenerate constant curves flag and error") {
    FunctionalSeries flat;
    flat.grid = uniform_grid(5);
    flat.values.resize(6, 5);
    for (int t = 0; t < 6; ++t)
        for (int c = 0; c < 5; ++c) flat.values(t, c) = 3.0 + c;
    const CovSurface s = lrc_lag_weighted(flat, false);
    CHECK(s.values.cwiseAbs().maxCoeff() == 0.0);
    const EigenSystem es = eigendecompose(s, 2);
    CHECK(es.degenerate);
    for (double v : es.eigenvalues) CHECK(std::abs(v) <= 1e-14);
    CHECK_THROWS_AS(extract_scores(flat, es, 1), EstimationError);
    CHECK_THROWS_AS(dynamic_fpc_scores(flat, LrcMethod::lag_weighted), EstimationError);
}

TEST_CASE("dynamic_fpc_scores equals the manual composition") {
    const FunctionalSeries fs = make_fs(24, 5, 61);
    const ScoreSeries via_pipeline = dynamic_fpc_scores(fs, LrcMethod::lag_weighted);
    const ScoreSeries manual =
        extract_scores(fs, eigendecompose(lrc_lag_weighted(fs, false), 1), 1);
    REQUIRE(via_pipeline.values.size() == manual.values.size());
    for (std::size_t i = 0; i < manual.values.size(); ++i)
        CHECK(via_pipeline.values[i] == manual.values[i]);

    PipelineDiagnostics diag;
    const ScoreSeries plugin = dynamic_fpc_scores(fs, LrcMethod::kernel_plugin, &diag);
    CHECK(plugin.values.size() == manual.values.size());
    CHECK(diag.plugin.h_opt > 0.0);
}

TEST_CASE("curve CSV round trip and validation") {
    const FunctionalSeries fs = make_fs(7, 5, 99);
    const std::string path = "test_fts_roundtrip.csv";
    write_curve_csv(fs, path);
    const FunctionalSeries back = read_curve_csv(path);
    CHECK(back.n() == fs.n());
    CHECK(back.W() == fs.W());
    CHECK((back.values - fs.values).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < fs.W(); ++i)
        CHECK(back.grid.points[i] == fs.grid.points[i]);
    std::remove(path.c_str());

    const std::string bad = "test_fts_ragged.csv";
    {
        std::ofstream f(bad);
        f << "0.0,0.5,1.0\n1,2,3\n1,2\n";
    }
    CHECK_THROWS_AS(read_curve_csv(bad), std::invalid_argument);
    std::remove(bad.c_str());

    const std::string nonmono = "test_fts_nonmono.csv";
    {
        std::ofstream f(nonmono);
        f << "0.0,1.0,0.5\n1,2,3\n4,5,6\n";
    }
    CHECK_THROWS_AS(read_curve_csv(nonmono), std::invalid_argument);
    std::remove(nonmono.c_str());
}

TEST_CASE("scalar CSV reader") {
    const std::string path = "test_fts_scalar.csv";
    {
        std::ofstream f(path);
        f << "1.5\n-2.25\n0.125\n";
    }
    const std::vector<double> v = read_scalar_csv(path);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.5);
    CHECK(v[1] == -2.25);
    CHECK(v[2] == 0.125);
    CHECK(csv_first_row_width(path) == 1);
    std::remove(path.c_str());
}
