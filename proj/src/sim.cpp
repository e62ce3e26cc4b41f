#include "lrd/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace lrd::sim {

double kernel_l2_norm(const OperatorKernel& k) {
    validate_grid(k.grid);
    double acc = 0.0;
    for (int i = 0; i < k.values.rows(); ++i)
        for (int j = 0; j < k.values.cols(); ++j)
            acc += k.grid.weights[i] * k.grid.weights[j] * k.values(i, j) * k.values(i, j);
    return std::sqrt(acc);
}

std::string strength_name(Strength s) {
    switch (s) {
        case Strength::weak: return "weak";
        case Strength::moderate: return "moderate";
        case Strength::strong: return "strong";
    }
    return "moderate";
}

Strength parse_strength(const std::string& s) {
    if (s == "weak") return Strength::weak;
    if (s == "moderate") return Strength::moderate;
    if (s == "strong") return Strength::strong;
    throw std::invalid_argument("unknown strength '" + s + "' (weak|moderate|strong)");
}

double case_coefficient(CaseKernel which, Strength strength) {
    if (which == CaseKernel::ar_case) {
        switch (strength) {
            case Strength::weak: return 0.068;
            case Strength::moderate: return 0.34;
            case Strength::strong: return 0.612;
        }
    }
    switch (strength) {
        case Strength::weak: return 0.059;
        case Strength::moderate: return 1.5;
        case Strength::strong: return 4.765;
    }
    return 0.0;
}

OperatorKernel make_case_kernel(CaseKernel which, Strength strength, const Grid& grid) {
    validate_grid(grid);
    const int W = grid.size();
    const double c = case_coefficient(which, strength);
    OperatorKernel k;
    k.grid = grid;
    k.values.resize(W, W);
    if (which == CaseKernel::ar_case) {
        for (int i = 0; i < W; ++i)
            for (int j = 0; j < W; ++j) {
                const double u = grid.points[i], v = grid.points[j];
                k.values(i, j) = c * std::exp(-(u * u + v * v) / 2.0);
            }
        k.name = "gaussian_ar_" + strength_name(strength);
    } else {
        for (int i = 0; i < W; ++i)
            for (int j = 0; j < W; ++j)
                k.values(i, j) = c * std::min(grid.points[i], grid.points[j]);
        k.name = "min_ma_" + strength_name(strength);
    }
    return k;
}

FracCoeffs ma_coeffs_fracint(double d, int N) {
    if (!(std::abs(d) < 0.5))
        throw std::invalid_argument("ma_coeffs_fracint: |d| must be below 1/2");
    if (N < 1) throw std::invalid_argument("ma_coeffs_fracint: need N >= 1");
    FracCoeffs fc;
    fc.d = d;
    fc.coeffs.resize(N + 1);
    fc.coeffs[0] = 1.0;
    for (int i = 1; i <= N; ++i)
        fc.coeffs[i] = fc.coeffs[i - 1] * (static_cast<double>(i) - 1.0 + d) / i;
    return fc;
}

FarimaSpec make_case_spec(int case_id, Strength strength, double d, int W, int n,
                          std::uint64_t seed) {
    if (case_id != 1 && case_id != 2)
        throw std::invalid_argument("make_case_spec: case must be 1 or 2");
    if (!(std::abs(d) < 0.5))
        throw std::invalid_argument("make_case_spec: d must be in (-1/2, 1/2)");
    if (n < 10) throw std::invalid_argument("make_case_spec: need n >= 10");
    FarimaSpec spec;
    spec.grid = uniform_grid(W);
    spec.p = 1;
    spec.q = case_id == 2 ? 1 : 0;
    spec.d = d;
    spec.ar_kernels.push_back(make_case_kernel(CaseKernel::ar_case, strength, spec.grid));
    if (case_id == 2)
        spec.ma_kernels.push_back(make_case_kernel(CaseKernel::ma_case, strength, spec.grid));
    spec.burn_in = n;
    spec.ma_truncation = n + 100;
    spec.seed = seed;
    spec.case_id = case_id;
    spec.strength = strength;
    return spec;
}

Eigen::VectorXd brownian_curve(const Grid& grid, Rng& rng) {
    const int W = grid.size();
    Eigen::VectorXd b(W);
    b[0] = 0.0;
    for (int i = 1; i < W; ++i) {
        const double step = grid.points[i] - grid.points[i - 1];
        b[i] = b[i - 1] + std::sqrt(step) * rng.normal();
    }
    return b;
}

Eigen::VectorXd apply_operator(const OperatorKernel& k, const Eigen::VectorXd& x) {
    if (x.size() != k.grid.size())
        throw std::invalid_argument("apply_operator: grid mismatch");
    Eigen::VectorXd weighted(x.size());
    for (int j = 0; j < x.size(); ++j) weighted[j] = k.grid.weights[j] * x[j];
    return k.values * weighted;
}

FunctionalSeries simulate_farima(const FarimaSpec& spec, int n, bool* unstable_warning) {
    validate_grid(spec.grid);
    if (n < 10) throw std::invalid_argument("simulate_farima: need n >= 10");
    if (static_cast<int>(spec.ar_kernels.size()) != spec.p ||
        static_cast<int>(spec.ma_kernels.size()) != spec.q)
        throw std::invalid_argument("simulate_farima: kernel counts must match p and q");
    if (!(std::abs(spec.d) < 0.5))
        throw std::invalid_argument("simulate_farima: d must be in (-1/2, 1/2)");
    const int W = spec.grid.size();
    const int burn = std::max(0, spec.burn_in);
    const int trunc = std::max(1, spec.ma_truncation);

    if (unstable_warning) {
        *unstable_warning = false;
        for (const auto& k : spec.ar_kernels)
            if (kernel_l2_norm(k) >= 1.0) *unstable_warning = true;
    }

    // quadrature baked into the operator matrices: apply = K * diag(w) * x
    std::vector<Eigen::MatrixXd> ar_ops, ma_ops;
    for (const auto& k : spec.ar_kernels) {
        if (!same_grid(k.grid, spec.grid))
            throw std::invalid_argument("simulate_farima: AR kernel grid mismatch");
        Eigen::MatrixXd op = k.values;
        for (int j = 0; j < W; ++j) op.col(j) *= spec.grid.weights[j];
        ar_ops.push_back(std::move(op));
    }
    for (const auto& k : spec.ma_kernels) {
        if (!same_grid(k.grid, spec.grid))
            throw std::invalid_argument("simulate_farima: MA kernel grid mismatch");
        Eigen::MatrixXd op = k.values;
        for (int j = 0; j < W; ++j) op.col(j) *= spec.grid.weights[j];
        ma_ops.push_back(std::move(op));
    }

    const int total = burn + n + trunc;
    Rng rng(spec.seed);

    // innovations in time order, then the ARMA recursion with zero initial
    // functions: Y_t = sum_i Phi_i Y_{t-i} + eta_t + sum_i Psi_i eta_{t-i}
    Eigen::MatrixXd eta(total, W);
    for (int t = 0; t < total; ++t) eta.row(t) = brownian_curve(spec.grid, rng).transpose();
    Eigen::MatrixXd y(total, W);
    for (int t = 0; t < total; ++t) {
        Eigen::VectorXd acc = eta.row(t).transpose();
        for (int i = 1; i <= spec.p; ++i)
            if (t - i >= 0) acc += ar_ops[i - 1] * y.row(t - i).transpose();
        for (int i = 1; i <= spec.q; ++i)
            if (t - i >= 0) acc += ma_ops[i - 1] * eta.row(t - i).transpose();
        y.row(t) = acc.transpose();
    }

    // X_t = sum_{i=0}^{N} b_i Y_{t-i} for the final n indices
    const FracCoeffs fc = ma_coeffs_fracint(spec.d, trunc);
    Eigen::VectorXd rev(trunc + 1);
    for (int i = 0; i <= trunc; ++i) rev[i] = fc.coeffs[trunc - i];

    FunctionalSeries out;
    out.grid = spec.grid;
    out.values.resize(n, W);
    for (int r = 0; r < n; ++r) {
        const int t = total - n + r;  // t - trunc >= burn >= 0
        out.values.row(r) = rev.transpose() * y.middleRows(t - trunc, trunc + 1);
    }
    return out;
}

std::vector<double> scalar_arfima0(double d, int n, std::uint64_t seed, int truncation) {
    if (n < 4) throw std::invalid_argument("scalar_arfima0: need n >= 4");
    const int trunc = truncation > 0 ? truncation : n + 100;
    const FracCoeffs fc = ma_coeffs_fracint(d, trunc);
    Rng rng(seed);
    std::vector<double> eps(n + trunc);
    for (double& e : eps) e = rng.normal();
    std::vector<double> out(n);
    for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        for (int i = 0; i <= trunc; ++i) acc += fc.coeffs[i] * eps[trunc + t - i];
        out[t] = acc;
    }
    return out;
}

}  // namespace lrd::sim
