#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "estimator_common.hpp"
#include "lrd/estimators.hpp"

namespace lrd::hurst {

using detail::check_scores;
using detail::finalize;

namespace {

// GPH-style least squares against b_j = -2 log10(lambda_j)
double gph_ratio(const std::vector<double>& log_freqs, const std::vector<double>& log_ords) {
    const std::size_t J = log_freqs.size();
    double bbar = 0.0;
    for (double lf : log_freqs) bbar += -2.0 * lf;
    bbar /= static_cast<double>(J);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        const double b = -2.0 * log_freqs[j];
        num += (b - bbar) * log_ords[j];
        den += (b - bbar) * (b - bbar);
    }
    return num / den;
}

}  // namespace

HurstEstimate estimate_periodogram(std::span<const double> scores, bool boxed) {
    check_scores(scores, 16, "periodogram estimator");
    const int n = static_cast<int>(scores.size());
    if (boxed && n < 100)
        throw std::invalid_argument("boxper: need at least 100 observations");
    const Periodogram pg = periodogram(scores);
    const int n_freq = static_cast<int>(pg.ordinates.size());
    const int band = static_cast<int>(0.1 * n_freq);  // lowest 10% of the frequencies
    if (band < 3) throw EstimationError("per: too few low-frequency ordinates");

    RegressionPoints reg;
    reg.robust = boxed;
    int dropped = 0;
    std::map<std::string, double> tuning;

    if (!boxed) {
        for (int j = 0; j < band; ++j) {
            if (!(pg.ordinates[j] > 0.0)) {
                ++dropped;
                continue;
            }
            reg.xs.push_back(std::log10(pg.freqs[j]));
            reg.ys.push_back(std::log10(pg.ordinates[j]));
        }
        tuning["band"] = band;
    } else {
        // the lowest ordinates stay raw; the rest of the band is averaged in
        // up to 60 logarithmically equidistant boxes
        const int raw_kept = std::min(band, std::max(5, static_cast<int>(0.02 * n_freq)));
        for (int j = 0; j < raw_kept; ++j) {
            if (!(pg.ordinates[j] > 0.0)) {
                ++dropped;
                continue;
            }
            reg.xs.push_back(std::log10(pg.freqs[j]));
            reg.ys.push_back(std::log10(pg.ordinates[j]));
        }
        int boxes_used = 0;
        if (band > raw_kept) {
            const int n_boxes = 60;
            const double lo = std::log(pg.freqs[raw_kept]);
            const double hi = std::log(pg.freqs[band - 1]) + 1e-12;
            std::vector<double> ord_sum(n_boxes, 0.0), logf_sum(n_boxes, 0.0);
            std::vector<int> count(n_boxes, 0);
            for (int j = raw_kept; j < band; ++j) {
                int box = static_cast<int>((std::log(pg.freqs[j]) - lo) / (hi - lo) * n_boxes);
                box = std::clamp(box, 0, n_boxes - 1);
                ord_sum[box] += pg.ordinates[j];
                logf_sum[box] += std::log10(pg.freqs[j]);
                ++count[box];
            }
            for (int b = 0; b < n_boxes; ++b) {
                if (count[b] == 0) continue;
                const double mean_ord = ord_sum[b] / count[b];
                if (!(mean_ord > 0.0)) {
                    ++dropped;
                    continue;
                }
                reg.xs.push_back(logf_sum[b] / count[b]);
                reg.ys.push_back(std::log10(mean_ord));
                ++boxes_used;
            }
        }
        tuning["band"] = band;
        tuning["raw_kept"] = raw_kept;
        tuning["boxes_used"] = boxes_used;
    }

    if (reg.xs.size() < 3)
        throw EstimationError(std::string(boxed ? "boxper" : "per") +
                              ": fewer than 3 usable regression points");
    const FitResult fit = log_log_fit(reg.xs, reg.ys, boxed);
    reg.slope = fit.slope;
    reg.intercept = fit.intercept;
    const double H = (1.0 - fit.slope) / 2.0;
    return finalize(boxed ? "boxper" : "per", H, std::move(reg), std::move(tuning), dropped);
}

HurstEstimate gph(std::span<const double> scores, int J) {
    check_scores(scores, 16, "gph");
    const int n = static_cast<int>(scores.size());
    if (J <= 0) J = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    const Periodogram pg = periodogram(scores);
    if (J < 3 || J > static_cast<int>(pg.ordinates.size()))
        throw std::invalid_argument("gph: bandwidth J out of range");

    RegressionPoints reg;
    int dropped = 0;
    for (int j = 0; j < J; ++j) {
        if (!(pg.ordinates[j] > 0.0)) {
            ++dropped;
            continue;
        }
        reg.xs.push_back(std::log10(pg.freqs[j]));
        reg.ys.push_back(std::log10(pg.ordinates[j]));
    }
    if (reg.xs.size() < 3) throw EstimationError("gph: fewer than 3 usable ordinates");
    const double d = gph_ratio(reg.xs, reg.ys);
    const FitResult fit = log_log_fit(reg.xs, reg.ys, false);
    reg.slope = fit.slope;
    reg.intercept = fit.intercept;
    return finalize("gph", d + 0.5, std::move(reg), {{"J", static_cast<double>(J)}}, dropped);
}

HurstEstimate smoothed_gph(std::span<const double> scores, int J, int h) {
    check_scores(scores, 16, "sgph");
    const int n = static_cast<int>(scores.size());
    if (J <= 0) J = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    if (h <= 0) h = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.9)));
    h = std::min(h, n - 1);
    const int n_freq = (n - 1) / 2;
    if (J < 3 || J > n_freq) throw std::invalid_argument("sgph: bandwidth J out of range");

    std::vector<double> freqs(J);
    for (int j = 1; j <= J; ++j) freqs[j - 1] = 2.0 * M_PI * j / n;
    const std::vector<double> smoothed = smoothed_periodogram_at(scores, freqs, h);

    RegressionPoints reg;
    int dropped = 0;
    for (int j = 0; j < J; ++j) {
        if (!(smoothed[j] > 0.0)) {
            ++dropped;  // the lag window can produce nonpositive ordinates
            continue;
        }
        reg.xs.push_back(std::log10(freqs[j]));
        reg.ys.push_back(std::log10(smoothed[j]));
    }
    if (reg.xs.size() < 3) throw EstimationError("sgph: all smoothed ordinates nonpositive");
    const double d = gph_ratio(reg.xs, reg.ys);
    const FitResult fit = log_log_fit(reg.xs, reg.ys, false);
    reg.slope = fit.slope;
    reg.intercept = fit.intercept;
    return finalize("sgph", d + 0.5, std::move(reg),
                    {{"J", static_cast<double>(J)}, {"h", static_cast<double>(h)}}, dropped);
}

DwtPyramid dwt_d4(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("dwt_d4: input length must be a power of two >= 2");
    static const double s3 = std::sqrt(3.0);
    static const double norm = 4.0 * std::sqrt(2.0);
    const double hf[4] = {(1.0 + s3) / norm, (3.0 + s3) / norm, (3.0 - s3) / norm,
                          (1.0 - s3) / norm};
    const double gf[4] = {hf[3], -hf[2], hf[1], -hf[0]};

    DwtPyramid out;
    std::vector<double> a(x.begin(), x.end());
    std::vector<std::vector<double>> levels;  // finest first
    while (a.size() >= 2) {
        const std::size_t half = a.size() / 2;
        std::vector<double> approx(half), detail(half);
        for (std::size_t i = 0; i < half; ++i) {
            double sa = 0.0, sd = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double v = a[(2 * i + k) % a.size()];
                sa += hf[k] * v;
                sd += gf[k] * v;
            }
            approx[i] = sa;
            detail[i] = sd;
        }
        levels.push_back(std::move(detail));
        a = std::move(approx);
    }
    out.approx = a;  // single scaling coefficient
    out.details.assign(levels.rbegin(), levels.rend());
    return out;
}

HurstEstimate wavelet_estimate(std::span<const double> scores, int min_level) {
    check_scores(scores, 8, "wavelet");
    const int n = static_cast<int>(scores.size());
    if (n < 64) throw EstimationError("wavelet: need at least 64 observations");
    int pow2 = 1;
    while (pow2 * 2 <= n) pow2 *= 2;
    const DwtPyramid pyr = dwt_d4(scores.first(pow2));
    const int L = static_cast<int>(pyr.details.size());

    RegressionPoints reg;
    std::vector<double> variances;
    int dropped = 0;
    int levels_used = 0;
    for (int j = std::max(min_level, 0); j < L; ++j) {
        if (static_cast<int>(pyr.details[j].size()) < 8) continue;
        double ss = 0.0;
        for (double w : pyr.details[j]) ss += w * w;
        const double rj = ss / static_cast<double>(pyr.details[j].size());
        if (!(rj > 0.0)) {
            ++dropped;
            continue;
        }
        reg.xs.push_back(std::log10(std::pow(2.0, 2.0 * j)));
        reg.ys.push_back(std::log10(rj));
        ++levels_used;
    }
    if (reg.xs.size() < 3) throw EstimationError("wavelet: fewer than 3 usable levels");
    const FitResult fit = log_log_fit(reg.xs, reg.ys, false);
    reg.slope = fit.slope;
    reg.intercept = fit.intercept;
    const double d = -fit.slope;
    // level j holds 2^j coefficients: the first pyramid pass (finest detail)
    // is level L-1, the last pass level 0
    return finalize("wavelet", d + 0.5, std::move(reg),
                    {{"levels_used", static_cast<double>(levels_used)},
                     {"depth", static_cast<double>(L)},
                     {"truncated_n", static_cast<double>(pow2)}},
                    dropped);
}

}  // namespace lrd::hurst
