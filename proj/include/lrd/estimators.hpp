#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrd/regression.hpp"

namespace lrd::hurst {

/// Result of one Hurst-exponent estimation.  d is always H - 1/2.
/// `tuning` records every bandwidth/knob actually used; `regression` holds
/// the log-log points when the method is regression-based.
struct HurstEstimate {
    std::string method;
    double H = 0.0;
    double d = 0.0;
    RegressionPoints regression;
    std::map<std::string, double> tuning;
    bool boundary_hit = false;   // optimizer stopped at a search-interval end
    int dropped_points = 0;      // nonpositive ordinates excluded from logs
    std::vector<std::string> notes;
};

/// Periodogram I(lambda_j) = |w(lambda_j)|^2 at harmonic frequencies
/// lambda_j = 2*pi*j/n, j = 1..floor((n-1)/2), with the (2*pi*n)^{-1/2}
/// transform convention, computed from the raw (uncentered) series.
struct Periodogram {
    std::vector<double> freqs;
    std::vector<double> ordinates;
};

Periodogram periodogram(std::span<const double> series);

/// Periodogram of the order-p tapered series (taper weights sin^{p-1}(pi t/n),
/// so p = 1 is untapered), normalized by 2*pi*sum(h_t^2).
Periodogram tapered_periodogram(std::span<const double> series, int p);

/// Parzen lag-window smoothed periodogram evaluated at the given frequencies,
/// built from the centered sample autocovariances.
std::vector<double> smoothed_periodogram_at(std::span<const double> series,
                                            std::span<const double> freqs, int h);

double parzen_window(double u);

// --- block statistics (time-domain building blocks) ---

/// Variance of the K = floor(n/m) block means, divisor K.
double agg_var(std::span<const double> scores, int m);
/// agg_var at m*+1 minus agg_var at m*.
double diff_var(std::span<const double> scores, int m_star);
/// Mean absolute block mean.
double abs_moment(std::span<const double> scores, int m);
/// Higuchi normalized curve length L(m) of the partial-sum path.
double higuchi_length(std::span<const double> scores, int m);
/// Mean residual variance F^2(m) of per-block linear detrending of the
/// partial-sum path; m >= 4.
double dfa_fluctuation(std::span<const double> scores, int m);

/// Default log-equispaced block grid: 30 geometric points from m_min to
/// floor(n/4), deduplicated after rounding.
std::vector<int> default_block_grid(int n, int m_min);

enum class TimeDomainMethod { aggvar, diffvar, absval, higuchi, peng };

/// Slope-to-H transform table: (s+2)/2 for aggvar/diffvar, s+1 for absval,
/// s+2 for higuchi, s/2 for peng.
double slope_to_H(TimeDomainMethod method, double slope);

/// Runs a block statistic over a log-equispaced grid, fits the log10-log10
/// line and applies the method's slope-to-H transform.
HurstEstimate estimate_time_domain(std::span<const double> scores, TimeDomainMethod method,
                                   std::span<const int> block_grid = {});

/// Single-point rescaled-range estimator log10(R/S)/log10(n).
HurstEstimate rs_simple(std::span<const double> scores);

/// Pox-plot flavor: R/S of the adjusted partial-sum range on growing
/// sub-series, slope of log10(R/S) on log10(length).
HurstEstimate rescaled_adjusted_range(std::span<const double> scores,
                                      std::span<const int> sub_lengths = {});

std::vector<int> default_sub_lengths(int n);

/// Log-periodogram regression over the lowest 10% of frequencies; with
/// boxed=true the tail of that band is averaged into 60 log-equidistant
/// boxes and fit robustly.
HurstEstimate estimate_periodogram(std::span<const double> scores, bool boxed);

/// Log-periodogram estimator of d over the first J ordinates (J = floor(sqrt(n))
/// by default).
HurstEstimate gph(std::span<const double> scores, int J = 0);

/// GPH on the Parzen-smoothed periodogram, lag-window span h = floor(n^{9/10}).
HurstEstimate smoothed_gph(std::span<const double> scores, int J = 0, int h = 0);

/// Wavelet log-variance estimator (Daubechies-4 pyramid, periodic boundary)
/// over all levels with at least 8 coefficients.
HurstEstimate wavelet_estimate(std::span<const double> scores, int min_level = 3);

/// Full D4 pyramid on a power-of-two input: details per level plus the final
/// approximation.  details[j] has 2^j entries (j = 0 coarsest).
struct DwtPyramid {
    std::vector<std::vector<double>> details;
    std::vector<double> approx;  // single coefficient
};
DwtPyramid dwt_d4(std::span<const double> x);

struct WhittleOptions {
    int m = 0;                 // Fourier count; 0 -> floor(n^0.65)
    double theta_lo = std::numeric_limits<double>::quiet_NaN();  // NaN -> variant default
    double theta_hi = std::numeric_limits<double>::quiet_NaN();
    int taper_order = 2;       // tapered variant
    double theta_max = -1.0;   // modified variant noise-to-signal cap; <0 -> n
};

HurstEstimate local_whittle(std::span<const double> scores, WhittleOptions opts = {});
HurstEstimate local_whittle_tapered(std::span<const double> scores, WhittleOptions opts = {});
HurstEstimate local_whittle_modified(std::span<const double> scores, WhittleOptions opts = {});
HurstEstimate exact_local_whittle(std::span<const double> scores, WhittleOptions opts = {});
HurstEstimate two_step_elw(std::span<const double> scores, WhittleOptions opts = {});

/// Fractional difference (1-L)^d with the exact Pochhammer coefficient
/// recursion c_0 = 1, c_k = c_{k-1} (k-1-d)/k, truncated at the series start.
std::vector<double> frac_diff(std::span<const double> series, double d);

/// Frequencies used by the tapered objective: j = p, 2p, ..., m (m % p == 0).
std::vector<int> whittle_frequency_indices(int m, int p);

// Objective evaluators (shared by the estimators and the oracle tests).
double lw_q_objective(const Periodogram& pg, int m, double G, double d);
double lw_profile(const Periodogram& pg, int m, double d);
double lwt_q_objective(const Periodogram& tapered, int m, int p, double G, double d);
double lwt_profile(const Periodogram& tapered, int m, int p, double d);
double lwm_objective(const Periodogram& pg, int n, int m, double d, double theta);
double elw_q_objective(std::span<const double> series, int m, double G, double d);
double elw_profile(std::span<const double> series, int m, double d);

int default_whittle_bandwidth(int n);

struct EstimatorOptions {
    std::vector<int> block_grid;    // time-domain methods
    std::vector<int> sub_lengths;   // rar
    int gph_bandwidth = 0;          // 0 -> floor(sqrt(n))
    int sgph_lag_window = 0;        // 0 -> floor(n^0.9)
    int wavelet_min_level = 3;
    WhittleOptions whittle;
};

/// Stable estimator ids: aggvar diffvar absval higuchi peng rs rar per boxper
/// gph sgph wavelet lw lwt lwm elw elw2.
const std::vector<std::string>& estimator_ids();

HurstEstimate estimate(std::span<const double> scores, std::string_view id,
                       const EstimatorOptions& opts = {});

}  // namespace lrd::hurst
