#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "estimator_common.hpp"
#include "lrd/errors.hpp"
#include "lrd/estimators.hpp"

namespace lrd::hurst {

using detail::check_scores;
using detail::finalize;

namespace {

std::vector<double> block_means(std::span<const double> scores, int m) {
    const int n = static_cast<int>(scores.size());
    const int K = n / m;  // trailing remainder dropped
    std::vector<double> means(K);
    for (int k = 0; k < K; ++k) {
        double acc = 0.0;
        for (int t = k * m; t < (k + 1) * m; ++t) acc += scores[t];
        means[k] = acc / m;
    }
    return means;
}

}  // namespace

double agg_var(std::span<const double> scores, int m) {
    check_scores(scores, 4);
    const int n = static_cast<int>(scores.size());
    if (m < 2 || m > n / 2 || n / m < 2)
        throw std::invalid_argument("agg_var: block size must satisfy 2 <= m <= n/2");
    const std::vector<double> means = block_means(scores, m);
    const int K = static_cast<int>(means.size());
    double mean_of_means = 0.0, mean_sq = 0.0;
    for (double v : means) {
        mean_of_means += v;
        mean_sq += v * v;
    }
    mean_of_means /= K;
    mean_sq /= K;
    return mean_sq - mean_of_means * mean_of_means;
}

double diff_var(std::span<const double> scores, int m_star) {
    return agg_var(scores, m_star + 1) - agg_var(scores, m_star);
}

double abs_moment(std::span<const double> scores, int m) {
    check_scores(scores, 4);
    const int n = static_cast<int>(scores.size());
    if (m < 2 || m > n / 2 || n / m < 2)
        throw std::invalid_argument("abs_moment: block size must satisfy 2 <= m <= n/2");
    const std::vector<double> means = block_means(scores, m);
    double acc = 0.0;
    for (double v : means) acc += std::abs(v);
    return acc / static_cast<double>(means.size());
}

double higuchi_length(std::span<const double> scores, int m) {
    check_scores(scores, 4);
    const int n = static_cast<int>(scores.size());
    if (m < 1 || m > n / 4)
        throw std::invalid_argument("higuchi_length: block size must satisfy 1 <= m <= n/4");
    // partial-sum path Y(1..n)
    std::vector<double> y(n);
    double acc = 0.0;
    for (int t = 0; t < n; ++t) {
        acc += scores[t];
        y[t] = acc;
    }
    double total = 0.0;
    for (int i = 1; i <= m; ++i) {
        const int count = (n - i) / m;
        double length = 0.0;
        for (int k = 1; k <= count; ++k)
            length += std::abs(y[i + k * m - 1] - y[i + (k - 1) * m - 1]);
        total += length * static_cast<double>(m) / static_cast<double>(n - i);
    }
    return total * static_cast<double>(n - 1) / (static_cast<double>(m) * m * m);
}

double dfa_fluctuation(std::span<const double> scores, int m) {
    check_scores(scores, 4);
    const int n = static_cast<int>(scores.size());
    if (m < 4) throw std::invalid_argument("dfa_fluctuation: block size must be >= 4");
    const int K = n / m;
    if (K < 1) throw std::invalid_argument("dfa_fluctuation: block size exceeds series");
    std::vector<double> t_path(n);
    double acc = 0.0;
    for (int t = 0; t < n; ++t) {
        acc += scores[t];
        t_path[t] = acc;
    }
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        // least squares of T_l on l over l = k*m+1 .. (k+1)*m
        double sl = 0, st = 0, sll = 0, slt = 0;
        for (int l = k * m + 1; l <= (k + 1) * m; ++l) {
            const double tv = t_path[l - 1];
            sl += l;
            st += tv;
            sll += static_cast<double>(l) * l;
            slt += l * tv;
        }
        const double det = m * sll - sl * sl;
        const double slope = (m * slt - sl * st) / det;
        const double icept = (st - slope * sl) / m;
        double rss = 0.0;
        for (int l = k * m + 1; l <= (k + 1) * m; ++l) {
            const double r = t_path[l - 1] - icept - slope * l;
            rss += r * r;
        }
        total += rss / m;
    }
    return total / K;
}

std::vector<int> default_block_grid(int n, int m_min) {
    std::vector<int> grid;
    const int m_max = n / 4;
    if (m_max < m_min) return grid;
    const double lo = std::log(static_cast<double>(m_min));
    const double hi = std::log(static_cast<double>(m_max));
    for (int k = 0; k < 30; ++k) {
        const double x = lo + (hi - lo) * k / 29.0;
        int m = static_cast<int>(std::llround(std::exp(x)));
        m = std::clamp(m, m_min, m_max);
        if (grid.empty() || m != grid.back()) grid.push_back(m);
    }
    return grid;
}

double slope_to_H(TimeDomainMethod method, double slope) {
    switch (method) {
        case TimeDomainMethod::aggvar:
        case TimeDomainMethod::diffvar: return (slope + 2.0) / 2.0;
        case TimeDomainMethod::absval: return slope + 1.0;
        case TimeDomainMethod::higuchi: return slope + 2.0;
        case TimeDomainMethod::peng: return slope / 2.0;
    }
    return slope;
}

HurstEstimate estimate_time_domain(std::span<const double> scores, TimeDomainMethod method,
                                   std::span<const int> block_grid) {
    check_scores(scores, 8);
    const int n = static_cast<int>(scores.size());
    const int m_min = method == TimeDomainMethod::peng ? 8 : 4;
    std::vector<int> grid(block_grid.begin(), block_grid.end());
    if (grid.empty()) grid = default_block_grid(n, m_min);

    const char* name = nullptr;
    double (*stat)(std::span<const double>, int) = nullptr;
    switch (method) {
        case TimeDomainMethod::aggvar: name = "aggvar"; stat = agg_var; break;
        case TimeDomainMethod::diffvar: name = "diffvar"; stat = diff_var; break;
        case TimeDomainMethod::absval: name = "absval"; stat = abs_moment; break;
        case TimeDomainMethod::higuchi: name = "higuchi"; stat = higuchi_length; break;
        case TimeDomainMethod::peng: name = "peng"; stat = dfa_fluctuation; break;
    }

    RegressionPoints reg;
    int dropped = 0;
    for (int m : grid) {
        const double value = stat(scores, m);
        if (!(value > 0.0) || !std::isfinite(value)) {
            ++dropped;  // nonpositive statistics have no logarithm
            continue;
        }
        reg.xs.push_back(std::log10(static_cast<double>(m)));
        reg.ys.push_back(std::log10(value));
    }
    if (reg.xs.size() < 3)
        throw EstimationError(std::string(name) + ": fewer than 3 usable regression points");
    const FitResult fit = log_log_fit(reg.xs, reg.ys, false);
    reg.slope = fit.slope;
    reg.intercept = fit.intercept;
    const double H = slope_to_H(method, fit.slope);
    return finalize(name, H, std::move(reg),
                    {{"m_min", static_cast<double>(grid.front())},
                     {"m_max", static_cast<double>(grid.back())},
                     {"grid_size", static_cast<double>(grid.size())}},
                    dropped);
}

HurstEstimate rs_simple(std::span<const double> scores) {
    check_scores(scores, 2);
    const int n = static_cast<int>(scores.size());
    double mean = 0.0;
    for (double v : scores) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : scores) ss += (v - mean) * (v - mean);
    const double s = std::sqrt(ss / (n - 1));
    if (!(s > 0.0)) throw EstimationError("rs: degenerate (constant) series");
    double cum = 0.0, cmax = -std::numeric_limits<double>::infinity(),
           cmin = std::numeric_limits<double>::infinity();
    for (double v : scores) {
        cum += v - mean;
        cmax = std::max(cmax, cum);
        cmin = std::min(cmin, cum);
    }
    const double r = cmax - cmin;
    if (!(r > 0.0)) throw EstimationError("rs: zero range");
    const double H = std::log10(r / s) / std::log10(static_cast<double>(n));
    return finalize("rs", H, {}, {{"R", r}, {"S", s}, {"n", static_cast<double>(n)}});
}

std::vector<int> default_sub_lengths(int n) {
    std::vector<int> lengths;
    if (n < 8) return lengths;
    const double lo = std::log(8.0);
    const double hi = std::log(static_cast<double>(n));
    for (int k = 0; k < 30; ++k) {
        const double x = lo + (hi - lo) * k / 29.0;
        int len = static_cast<int>(std::llround(std::exp(x)));
        len = std::clamp(len, 8, n);
        if (lengths.empty() || len != lengths.back()) lengths.push_back(len);
    }
    return lengths;
}

HurstEstimate rescaled_adjusted_range(std::span<const double> scores,
                                      std::span<const int> sub_lengths) {
    check_scores(scores, 8);
    const int n = static_cast<int>(scores.size());
    std::vector<int> lengths(sub_lengths.begin(), sub_lengths.end());
    if (lengths.empty()) lengths = default_sub_lengths(n);
    if (lengths.size() < 3)
        throw std::invalid_argument("rar: need at least 3 sub-lengths");
    for (int len : lengths)
        if (len < 8 || len > n)
            throw std::invalid_argument("rar: sub-lengths must satisfy 8 <= len <= n");

    RegressionPoints reg;
    int dropped = 0;
    for (int len : lengths) {
        double sum = 0.0, sumsq = 0.0;
        for (int t = 0; t < len; ++t) {
            sum += scores[t];
            sumsq += scores[t] * scores[t];
        }
        const double s2 = sumsq / len - (sum / len) * (sum / len);
        if (!(s2 > 0.0)) {
            ++dropped;  // constant sub-series
            continue;
        }
        double cum = 0.0, amax = -std::numeric_limits<double>::infinity(),
               amin = std::numeric_limits<double>::infinity();
        for (int t = 0; t < len; ++t) {
            cum += scores[t];
            const double adj = cum - (static_cast<double>(t + 1) / len) * sum;
            amax = std::max(amax, adj);
            amin = std::min(amin, adj);
        }
        const double rs = (amax - amin) / std::sqrt(s2);
        if (!(rs > 0.0)) {
            ++dropped;
            continue;
        }
        reg.xs.push_back(std::log10(static_cast<double>(len)));
        reg.ys.push_back(std::log10(rs));
    }
    if (reg.xs.size() < 3) throw EstimationError("rar: fewer than 3 usable sub-lengths");
    const FitResult fit = log_log_fit(reg.xs, reg.ys, false);
    reg.slope = fit.slope;
    reg.intercept = fit.intercept;
    const double H = fit.slope;
    return finalize("rar", H, std::move(reg),
                    {{"sub_lengths", static_cast<double>(lengths.size())},
                     {"min_length", static_cast<double>(lengths.front())},
                     {"max_length", static_cast<double>(lengths.back())}},
                    dropped);
}

}  // namespace lrd::hurst
