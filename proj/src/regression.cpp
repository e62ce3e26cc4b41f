#include "lrd/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrd::hurst {

namespace {

FitResult weighted_fit(std::span<const double> xs, std::span<const double> ys,
                       std::span<const double> w) {
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sw += w[i];
        swx += w[i] * xs[i];
        swy += w[i] * ys[i];
        swxx += w[i] * xs[i] * xs[i];
        swxy += w[i] * xs[i] * ys[i];
    }
    const double det = sw * swxx - swx * swx;
    if (det <= 0.0 || !std::isfinite(det))
        throw std::invalid_argument("log_log_fit: degenerate abscissae");
    FitResult fit;
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;
    return fit;
}

}  // namespace

FitResult log_log_fit(std::span<const double> xs, std::span<const double> ys, bool robust) {
    if (xs.size() != ys.size()) throw std::invalid_argument("log_log_fit: length mismatch");
    if (xs.size() < 3) throw std::invalid_argument("log_log_fit: need at least 3 points");
    for (double v : xs)
        if (!std::isfinite(v)) throw std::invalid_argument("log_log_fit: non-finite abscissa");
    for (double v : ys)
        if (!std::isfinite(v)) throw std::invalid_argument("log_log_fit: non-finite ordinate");

    std::vector<double> w(xs.size(), 1.0);
    FitResult fit = weighted_fit(xs, ys, w);
    if (!robust) return fit;

    // Huber IRLS, tuning constant 1.345, scale from the residual MAD
    const double tune = 1.345;
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> resid(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            resid[i] = ys[i] - fit.intercept - fit.slope * xs[i];
        std::vector<double> absr(resid.size());
        for (std::size_t i = 0; i < resid.size(); ++i) absr[i] = std::abs(resid[i]);
        std::nth_element(absr.begin(), absr.begin() + absr.size() / 2, absr.end());
        double mad = absr[absr.size() / 2];
        if (absr.size() % 2 == 0) {
            const double lower = *std::max_element(absr.begin(), absr.begin() + absr.size() / 2);
            mad = 0.5 * (mad + lower);
        }
        double scale = mad / 0.6745;
        if (scale <= 0.0) break;  // (near-)exact fit
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double u = std::abs(resid[i]) / (tune * scale);
            w[i] = u <= 1.0 ? 1.0 : 1.0 / u;
        }
        const FitResult next = weighted_fit(xs, ys, w);
        const double delta =
            std::abs(next.slope - fit.slope) + std::abs(next.intercept - fit.intercept);
        fit = next;
        if (delta < 1e-10) break;
    }
    return fit;
}

}  // namespace lrd::hurst
