#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lrd/fts.hpp"
#include "lrd/rng.hpp"

namespace lrd::sim {

/// Discretized integral-operator kernel k(u,v) on grid x grid.
struct OperatorKernel {
    Grid grid;
    Eigen::MatrixXd values;  // W x W
    std::string name;
};

/// Quadrature L2 norm sqrt(integral of k(u,v)^2 over [0,1]^2).
double kernel_l2_norm(const OperatorKernel& k);

enum class Strength { weak, moderate, strong };
enum class CaseKernel { ar_case, ma_case };

std::string strength_name(Strength s);
Strength parse_strength(const std::string& s);

/// AR kernel c * exp(-(u^2+v^2)/2) with c in {0.068, 0.34, 0.612};
/// MA kernel c * min(u,v) with c in {0.059, 1.5, 4.765}
/// for weak / moderate / strong dependence.
OperatorKernel make_case_kernel(CaseKernel which, Strength strength, const Grid& grid);

double case_coefficient(CaseKernel which, Strength strength);

/// Coefficients of the fractional-integration MA(inf) expansion
/// (1-B)^{-d} = sum b_i B^i: b_0 = 1, b_i = b_{i-1} (i-1+d)/i.
struct FracCoeffs {
    double d = 0.0;
    std::vector<double> coeffs;  // b_0..b_N
};

FracCoeffs ma_coeffs_fracint(double d, int N);

/// Functional ARFIMA(p,d,q) specification.  Innovation curves are standard
/// Brownian motions on the grid; the ARMA recursion runs with zero initial
/// functions and `burn_in` warmup steps, and the fractional integration is
/// truncated at `ma_truncation` lags.
struct FarimaSpec {
    int p = 0;
    int q = 0;
    double d = 0.0;
    std::vector<OperatorKernel> ar_kernels;
    std::vector<OperatorKernel> ma_kernels;
    Grid grid;
    int burn_in = 0;
    int ma_truncation = 0;
    std::uint64_t seed = 0;
    // provenance when built from a shipped case (0 = custom kernels)
    int case_id = 0;
    Strength strength = Strength::moderate;
};

/// Case-1/2 spec with the defaults used by the benchmark: burn_in = n,
/// ma_truncation = n + 100, W-point grid.
FarimaSpec make_case_spec(int case_id, Strength strength, double d, int W, int n,
                          std::uint64_t seed);

/// Brownian path on the grid: B(0) = 0, independent N(0, step) increments.
Eigen::VectorXd brownian_curve(const Grid& grid, Rng& rng);

/// Quadrature-discretized integral operator application.
Eigen::VectorXd apply_operator(const OperatorKernel& k, const Eigen::VectorXd& x);

/// Simulates n curves.  Innovations are generated in time order from
/// Rng(spec.seed), so runs are bit-reproducible.  Sets *unstable_warning when
/// an AR kernel has quadrature norm >= 1.
FunctionalSeries simulate_farima(const FarimaSpec& spec, int n,
                                 bool* unstable_warning = nullptr);

/// Scalar ARFIMA(0,d,0): truncated MA(inf) of iid standard normals,
/// truncation defaults to n + 100.  Used by the univariate estimator checks.
std::vector<double> scalar_arfima0(double d, int n, std::uint64_t seed,
                                   int truncation = -1);

}  // namespace lrd::sim
