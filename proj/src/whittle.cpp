#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "estimator_common.hpp"
#include "fft.hpp"
#include "lrd/estimators.hpp"

namespace lrd::hurst {

using detail::check_scores;
using detail::finalize;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Series scaled to unit root-mean-square.  The memory parameter is scale
/// free, but optimizing on a normalized series keeps the golden-section
/// comparison sequence identical under beta -> a*beta; G is rescaled back.
struct Normalized {
    std::vector<double> values;
    double rms_sq = 1.0;
};

Normalized normalize_rms(std::span<const double> scores, const char* who) {
    double ss = 0.0;
    for (double v : scores) ss += v * v;
    ss /= static_cast<double>(scores.size());
    if (!(ss > 0.0)) throw EstimationError(std::string(who) + ": degenerate (zero) series");
    Normalized out;
    out.rms_sq = ss;
    const double inv = 1.0 / std::sqrt(ss);
    out.values.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) out.values[i] = scores[i] * inv;
    return out;
}

struct MinimizeResult {
    double x = 0.0;
    double fx = kInf;
    bool boundary = false;
};

/// Coarse grid scan (guards against multiple local minima) followed by
/// golden-section refinement of the bracketing interval.
MinimizeResult grid_golden(const std::function<double(double)>& fn, double lo, double hi,
                           int grid_pts = 201, double tol = 1e-7) {
    MinimizeResult best;
    int best_idx = 0;
    for (int i = 0; i < grid_pts; ++i) {
        const double x = lo + (hi - lo) * i / (grid_pts - 1);
        const double fx = fn(x);
        if (fx < best.fx) {
            best.fx = fx;
            best.x = x;
            best_idx = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best_idx - 1) / (grid_pts - 1);
    double b = lo + (hi - lo) * std::min(grid_pts - 1, best_idx + 1) / (grid_pts - 1);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = fn(x1);
    double f2 = fn(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = fn(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = fn(x2);
        }
        if (f1 < best.fx) {
            best.fx = f1;
            best.x = x1;
        }
        if (f2 < best.fx) {
            best.fx = f2;
            best.x = x2;
        }
    }
    best.boundary = (best.x - lo) <= 1e-6 * (hi - lo) || (hi - best.x) <= 1e-6 * (hi - lo);
    return best;
}

/// Secant iteration on an objective derivative, clamped to [lo, hi].  The
/// objective is flat to machine precision within ~1e-8 of its minimizer, so
/// value comparisons alone cannot pin the argmin tighter; driving the
/// analytic derivative to zero restores full precision (and with it exact
/// scale equivariance of the estimators).  Falls back to x0 when the
/// derivative does not shrink.
double secant_root(const std::function<double(double)>& deriv, double lo, double hi,
                   double x0) {
    const double span = hi - lo;
    double a = x0;
    double fa = deriv(a);
    const double f0 = std::abs(fa);
    double b = std::clamp(x0 + 1e-7 * span, lo, hi);
    if (b == a) b = std::clamp(x0 - 1e-7 * span, lo, hi);
    double fb = deriv(b);
    for (int it = 0; it < 24; ++it) {
        if (!std::isfinite(fa) || !std::isfinite(fb) || fa == fb) break;
        double c = b - fb * (b - a) / (fb - fa);
        c = std::clamp(c, lo, hi);
        if (c == b) break;
        a = b;
        fa = fb;
        b = c;
        fb = deriv(b);
        if (std::abs(b - a) < 1e-14 * std::max(1.0, span)) break;
    }
    return (std::isfinite(fb) && std::abs(fb) <= f0) ? b : x0;
}

bool near_boundary(double x, double lo, double hi) {
    return (x - lo) <= 1e-6 * (hi - lo) || (hi - x) <= 1e-6 * (hi - lo);
}

int checked_bandwidth(int n, int m, const char* who) {
    const int nfreq = (n - 1) / 2;
    if (m <= 0) m = default_whittle_bandwidth(n);
    if (m < 1 || m > nfreq)
        throw std::invalid_argument(std::string(who) + ": bandwidth m out of range");
    return m;
}

void checked_theta(double& lo, double& hi, double def_lo, double def_hi, const char* who) {
    if (std::isnan(lo)) lo = def_lo;
    if (std::isnan(hi)) hi = def_hi;
    if (!(lo < hi))
        throw std::invalid_argument(std::string(who) + ": need theta_lo < theta_hi");
}

}  // namespace

int default_whittle_bandwidth(int n) {
    const int nfreq = (n - 1) / 2;
    const int m = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.65)));
    return std::clamp(m, 1, nfreq);
}

std::vector<int> whittle_frequency_indices(int m, int p) {
    if (p < 1 || m < p || m % p != 0)
        throw std::invalid_argument("whittle_frequency_indices: m must be a positive multiple of p");
    std::vector<int> idx;
    for (int j = p; j <= m; j += p) idx.push_back(j);
    return idx;
}

double lw_q_objective(const Periodogram& pg, int m, double G, double d) {
    if (!(G > 0.0)) return kInf;
    double acc = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double lam = pg.freqs[j - 1];
        const double spec = G * std::pow(lam, -2.0 * d);
        acc += std::log(spec) + pg.ordinates[j - 1] / spec;
    }
    return acc / m;
}

double lw_profile(const Periodogram& pg, int m, double d) {
    double ghat = 0.0, slog = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double lam = pg.freqs[j - 1];
        ghat += std::pow(lam, 2.0 * d) * pg.ordinates[j - 1];
        slog += std::log(lam);
    }
    ghat /= m;
    if (!(ghat > 0.0)) return kInf;
    return std::log(ghat) - 2.0 * d * slog / m;
}

double lwt_q_objective(const Periodogram& tapered, int m, int p, double G, double d) {
    if (!(G > 0.0)) return kInf;
    double acc = 0.0;
    for (int j = p; j <= m; j += p) {
        const double lam = tapered.freqs[j - 1];
        const double spec = G * std::pow(lam, -2.0 * d);
        acc += std::log(spec) + tapered.ordinates[j - 1] / spec;
    }
    return acc * p / m;
}

double lwt_profile(const Periodogram& tapered, int m, int p, double d) {
    double ghat = 0.0, slog = 0.0;
    for (int j = p; j <= m; j += p) {
        const double lam = tapered.freqs[j - 1];
        ghat += std::pow(lam, 2.0 * d) * tapered.ordinates[j - 1];
        slog += p * std::log(lam);
    }
    ghat = ghat * p / m;  // ordering keeps the p = 1 path identical to lw_profile
    if (!(ghat > 0.0)) return kInf;
    return std::log(ghat) - 2.0 * d * slog / m;
}

double lwm_objective(const Periodogram& pg, int n, int m, double d, double theta) {
    double ratio = 0.0, slog = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double lam = pg.freqs[j - 1];
        const double g = std::pow(lam, -2.0 * d) + theta / (lam * lam * n);
        ratio += pg.ordinates[j - 1] / g;
        slog += std::log(g);
    }
    ratio /= m;
    if (!(ratio > 0.0)) return kInf;
    return std::log(ratio) + slog / m;
}

double elw_q_objective(std::span<const double> series, int m, double G, double d) {
    if (!(G > 0.0)) return kInf;
    const std::vector<double> diffed = frac_diff(series, d);
    const Periodogram pg = periodogram(diffed);
    double acc = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double lam = pg.freqs[j - 1];
        acc += std::log(G * std::pow(lam, -2.0 * d)) + pg.ordinates[j - 1] / G;
    }
    return acc / m;
}

double elw_profile(std::span<const double> series, int m, double d) {
    const std::vector<double> diffed = frac_diff(series, d);
    const Periodogram pg = periodogram(diffed);
    double ghat = 0.0, slog = 0.0;
    for (int j = 1; j <= m; ++j) {
        ghat += pg.ordinates[j - 1];
        slog += std::log(pg.freqs[j - 1]);
    }
    ghat /= m;
    if (!(ghat > 0.0)) return kInf;
    return std::log(ghat) - 2.0 * d * slog / m;
}

std::vector<double> frac_diff(std::span<const double> series, double d) {
    const std::size_t n = series.size();
    if (n == 0) return {};
    for (double v : series)
        if (!std::isfinite(v)) throw std::invalid_argument("frac_diff: non-finite input");
    // c_0 = 1, c_k = c_{k-1} (k-1-d)/k  (binomial expansion of (1-L)^d)
    std::vector<double> c(n);
    c[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k)
        c[k] = c[k - 1] * (static_cast<double>(k) - 1.0 - d) / static_cast<double>(k);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= t; ++k) acc += c[k] * series[t - k];
        out[t] = acc;
    }
    return out;
}

namespace {

/// frac_diff with an FFT convolution shortcut for long series; identical in
/// exact arithmetic, used only inside the ELW optimizer loop.
std::vector<double> frac_diff_fast(std::span<const double> series, double d) {
    const std::size_t n = series.size();
    if (n < 768) return frac_diff(series, d);
    std::vector<double> c(n);
    c[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k)
        c[k] = c[k - 1] * (static_cast<double>(k) - 1.0 - d) / static_cast<double>(k);
    return lrd::detail::fft_convolve(c, series, n);
}

double elw_profile_fast(std::span<const double> series, int m, double d,
                        double sum_log_lambda) {
    const std::vector<double> diffed = frac_diff_fast(series, d);
    const Periodogram pg = periodogram(diffed);
    double ghat = 0.0;
    for (int j = 1; j <= m; ++j) ghat += pg.ordinates[j - 1];
    ghat /= m;
    if (!(ghat > 0.0)) return kInf;
    return std::log(ghat) - 2.0 * d * sum_log_lambda / m;
}

}  // namespace

HurstEstimate local_whittle(std::span<const double> scores, WhittleOptions opts) {
    check_scores(scores, 16, "lw");
    const int n = static_cast<int>(scores.size());
    const int m = checked_bandwidth(n, opts.m, "lw");
    double lo = opts.theta_lo, hi = opts.theta_hi;
    checked_theta(lo, hi, -0.499, 0.499, "lw");
    if (lo <= -0.5 || hi >= 0.5)
        throw std::invalid_argument("lw: admissible interval must lie inside (-1/2, 1/2)");

    const Normalized norm = normalize_rms(scores, "lw");
    const Periodogram pg = periodogram(norm.values);
    const MinimizeResult res =
        grid_golden([&](double d) { return lw_profile(pg, m, d); }, lo, hi);
    if (!std::isfinite(res.fx)) throw EstimationError("lw: degenerate periodogram");
    double slog = 0.0;
    for (int j = 1; j <= m; ++j) slog += std::log(pg.freqs[j - 1]);
    const auto deriv = [&](double d) {
        double g = 0.0, gp = 0.0;
        for (int j = 1; j <= m; ++j) {
            const double ll = std::log(pg.freqs[j - 1]);
            const double term = std::exp(2.0 * d * ll) * pg.ordinates[j - 1];
            g += term;
            gp += 2.0 * ll * term;
        }
        return gp / g - 2.0 * slog / m;
    };
    const double dhat = secant_root(deriv, lo, hi, res.x);

    double ghat = 0.0;
    for (int j = 1; j <= m; ++j)
        ghat += std::pow(pg.freqs[j - 1], 2.0 * dhat) * pg.ordinates[j - 1];
    ghat = ghat / m * norm.rms_sq;

    HurstEstimate est = finalize("lw", dhat + 0.5, {},
                                 {{"m", static_cast<double>(m)},
                                  {"theta_lo", lo},
                                  {"theta_hi", hi},
                                  {"G_hat", ghat},
                                  {"objective", lw_profile(pg, m, dhat)}});
    est.boundary_hit = near_boundary(dhat, lo, hi);
    return est;
}

HurstEstimate local_whittle_tapered(std::span<const double> scores, WhittleOptions opts) {
    check_scores(scores, 16, "lwt");
    const int n = static_cast<int>(scores.size());
    const int p = opts.taper_order;
    if (p < 1) throw std::invalid_argument("lwt: taper order must be >= 1");
    int m = opts.m;
    if (m <= 0) {
        m = default_whittle_bandwidth(n);
        m -= m % p;  // thinned summation needs m divisible by p
        if (m < p) m = p;
    }
    m = checked_bandwidth(n, m, "lwt");
    if (m % p != 0) throw std::invalid_argument("lwt: bandwidth m must be divisible by p");
    const double dstar = p - 0.5;
    double lo = opts.theta_lo, hi = opts.theta_hi;
    if (p == 1) {
        checked_theta(lo, hi, -0.499, 0.499, "lwt");
    } else {
        checked_theta(lo, hi, 1e-3, dstar - 1e-3, "lwt");
    }

    const Normalized norm = normalize_rms(scores, "lwt");
    const Periodogram pg = tapered_periodogram(norm.values, p);
    const MinimizeResult res =
        grid_golden([&](double d) { return lwt_profile(pg, m, p, d); }, lo, hi);
    if (!std::isfinite(res.fx)) throw EstimationError("lwt: degenerate periodogram");
    double slog = 0.0;
    for (int j = p; j <= m; j += p) slog += p * std::log(pg.freqs[j - 1]);
    const auto deriv = [&](double d) {
        double g = 0.0, gp = 0.0;
        for (int j = p; j <= m; j += p) {
            const double ll = std::log(pg.freqs[j - 1]);
            const double term = std::exp(2.0 * d * ll) * pg.ordinates[j - 1];
            g += term;
            gp += 2.0 * ll * term;
        }
        return gp / g - 2.0 * slog / m;
    };
    const double dhat = secant_root(deriv, lo, hi, res.x);

    double ghat = 0.0;
    for (int j = p; j <= m; j += p)
        ghat += std::pow(pg.freqs[j - 1], 2.0 * dhat) * pg.ordinates[j - 1];
    ghat = ghat * p / m * norm.rms_sq;

    HurstEstimate est = finalize("lwt", dhat + 0.5, {},
                                 {{"m", static_cast<double>(m)},
                                  {"p", static_cast<double>(p)},
                                  {"d_star", dstar},
                                  {"theta_lo", lo},
                                  {"theta_hi", hi},
                                  {"G_hat", ghat},
                                  {"objective", lwt_profile(pg, m, p, dhat)}});
    est.boundary_hit = near_boundary(dhat, lo, hi);
    return est;
}

HurstEstimate local_whittle_modified(std::span<const double> scores, WhittleOptions opts) {
    check_scores(scores, 16, "lwm");
    const int n = static_cast<int>(scores.size());
    const int m = checked_bandwidth(n, opts.m, "lwm");
    double lo = std::isnan(opts.theta_lo) ? 0.0 : opts.theta_lo;
    double hi = std::isnan(opts.theta_hi) ? 0.5 : opts.theta_hi;
    if (!(lo >= 0.0 && hi <= 0.5 && lo < hi))
        throw std::invalid_argument("lwm: memory parameter interval must lie in [0, 1/2]");
    const double theta_max = opts.theta_max < 0.0 ? static_cast<double>(n) : opts.theta_max;

    const Normalized norm = normalize_rms(scores, "lwm");
    const Periodogram pg = periodogram(norm.values);
    const auto objective = [&](double d, double th) { return lwm_objective(pg, n, m, d, th); };

    // coarse grid over the (d, theta) rectangle, then coordinate-wise
    // golden-section refinement ending on d
    double best_d = lo, best_theta = 0.0, best_f = kInf;
    for (int i = 0; i < 21; ++i) {
        const double d = lo + (hi - lo) * i / 20.0;
        for (int k = 0; k < 21; ++k) {
            const double th = theta_max * k / 20.0;
            const double f = objective(d, th);
            if (f < best_f) {
                best_f = f;
                best_d = d;
                best_theta = th;
            }
        }
    }
    for (int round = 0; round < 3; ++round) {
        const MinimizeResult rt = grid_golden(
            [&](double th) { return objective(best_d, th); }, 0.0, theta_max, 101);
        if (rt.fx <= best_f) {
            best_f = rt.fx;
            best_theta = rt.x;
        }
        const MinimizeResult rd =
            grid_golden([&](double d) { return objective(d, best_theta); }, lo, hi, 101);
        if (rd.fx <= best_f) {
            best_f = rd.fx;
            best_d = rd.x;
        }
    }
    if (!std::isfinite(best_f)) throw EstimationError("lwm: degenerate periodogram");

    // alternate derivative polishing until both partials settle, so the
    // returned pair is jointly stationary (or pinned at a box edge)
    const auto partial = [&](double d, double th, bool wrt_d) {
        double s = 0.0, sv = 0.0, logv = 0.0;
        for (int j = 1; j <= m; ++j) {
            const double lam = pg.freqs[j - 1];
            const double g = std::pow(lam, -2.0 * d) + th / (lam * lam * n);
            const double gv = wrt_d ? -2.0 * std::log(lam) * std::pow(lam, -2.0 * d)
                                    : 1.0 / (lam * lam * n);
            s += pg.ordinates[j - 1] / g;
            sv += -pg.ordinates[j - 1] / (g * g) * gv;
            logv += gv / g;
        }
        return sv / s + logv / m;
    };
    for (int round = 0; round < 10; ++round) {
        const double prev_d = best_d, prev_theta = best_theta;
        best_theta = secant_root([&](double th) { return partial(best_d, th, false); }, 0.0,
                                 theta_max, best_theta);
        best_d =
            secant_root([&](double d) { return partial(d, best_theta, true); }, lo, hi, best_d);
        if (std::abs(best_d - prev_d) < 1e-13 &&
            std::abs(best_theta - prev_theta) < 1e-10 * std::max(1.0, theta_max))
            break;
    }
    best_f = objective(best_d, best_theta);

    double ghat = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double lam = pg.freqs[j - 1];
        const double g = std::pow(lam, -2.0 * best_d) + best_theta / (lam * lam * n);
        ghat += pg.ordinates[j - 1] / g;
    }
    ghat = ghat / m * norm.rms_sq;

    HurstEstimate est = finalize("lwm", best_d + 0.5, {},
                                 {{"m", static_cast<double>(m)},
                                  {"theta_lo", lo},
                                  {"theta_hi", hi},
                                  {"theta_noise", best_theta},
                                  {"theta_max", theta_max},
                                  {"G_hat", ghat},
                                  {"objective", best_f}});
    est.boundary_hit = boundary;
    return est;
}

namespace {

HurstEstimate elw_impl(std::span<const double> scores, WhittleOptions opts, const char* name,
                       double mu_hat, bool record_mu) {
    const int n = static_cast<int>(scores.size());
    const int m = checked_bandwidth(n, opts.m, name);
    double lo = opts.theta_lo, hi = opts.theta_hi;
    checked_theta(lo, hi, -0.5, 1.0, name);

    const Normalized norm = normalize_rms(scores, name);
    double sum_log_lambda = 0.0;
    for (int j = 1; j <= m; ++j) sum_log_lambda += std::log(2.0 * M_PI * j / n);

    const MinimizeResult res = grid_golden(
        [&](double d) { return elw_profile_fast(norm.values, m, d, sum_log_lambda); }, lo, hi);
    if (!std::isfinite(res.fx)) throw EstimationError(std::string(name) + ": degenerate series");

    const std::vector<double> diffed = frac_diff_fast(norm.values, res.x);
    const Periodogram pg = periodogram(diffed);
    double ghat = 0.0;
    for (int j = 1; j <= m; ++j) ghat += pg.ordinates[j - 1];
    ghat = ghat / m * norm.rms_sq;

    std::map<std::string, double> tuning = {{"m", static_cast<double>(m)},
                                            {"theta_lo", lo},
                                            {"theta_hi", hi},
                                            {"G_hat", ghat},
                                            {"objective", res.fx}};
    if (record_mu) tuning["mu_hat"] = mu_hat;
    HurstEstimate est = finalize(name, res.x + 0.5, {}, std::move(tuning));
    est.boundary_hit = res.boundary;
    if (record_mu)
        est.notes.push_back("demeaned by the sample average; consistent for d in (-1/2, 1)");
    return est;
}

}  // namespace

HurstEstimate exact_local_whittle(std::span<const double> scores, WhittleOptions opts) {
    check_scores(scores, 16, "elw");
    return elw_impl(scores, opts, "elw", 0.0, false);
}

HurstEstimate two_step_elw(std::span<const double> scores, WhittleOptions opts) {
    check_scores(scores, 16, "elw2");
    double mean = 0.0;
    for (double v : scores) mean += v;
    mean /= static_cast<double>(scores.size());
    std::vector<double> centered(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) centered[i] = scores[i] - mean;
    return elw_impl(centered, opts, "elw2", mean, true);
}

}  // namespace lrd::hurst
