#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "lrd/estimators.hpp"

namespace lrd::hurst {

// I(lambda_j) = |(2 pi n)^{-1/2} sum_t beta_t e^{i t lambda_j}|^2.  The
// 1-based time index only rotates the transform by a unit-modulus phase, so
// |.|^2 of the 0-based DFT is identical.
Periodogram periodogram(std::span<const double> series) {
    const int n = static_cast<int>(series.size());
    if (n < 4) throw std::invalid_argument("periodogram: need at least 4 observations");
    const auto dft = detail::real_dft(series);
    const int nfreq = (n - 1) / 2;
    Periodogram pg;
    pg.freqs.resize(nfreq);
    pg.ordinates.resize(nfreq);
    const double norm = 2.0 * M_PI * static_cast<double>(n);
    for (int j = 1; j <= nfreq; ++j) {
        pg.freqs[j - 1] = 2.0 * M_PI * j / n;
        pg.ordinates[j - 1] = std::norm(dft[j]) / norm;
    }
    return pg;
}

Periodogram tapered_periodogram(std::span<const double> series, int p) {
    const int n = static_cast<int>(series.size());
    if (n < 4) throw std::invalid_argument("tapered_periodogram: need at least 4 observations");
    if (p < 1) throw std::invalid_argument("tapered_periodogram: taper order must be >= 1");
    // order-p taper = (p-1)-fold product of the cosine taper sin(pi t/n);
    // p = 1 leaves the series untouched and reproduces the plain periodogram
    std::vector<double> tapered(n);
    double sum_h2 = 0.0;
    for (int t = 1; t <= n; ++t) {
        const double h = std::pow(std::sin(M_PI * t / n), p - 1);
        tapered[t - 1] = h * series[t - 1];
        sum_h2 += h * h;
    }
    if (sum_h2 <= 0.0) throw std::invalid_argument("tapered_periodogram: empty taper");
    const auto dft = detail::real_dft(tapered);
    const int nfreq = (n - 1) / 2;
    Periodogram pg;
    pg.freqs.resize(nfreq);
    pg.ordinates.resize(nfreq);
    const double norm = 2.0 * M_PI * sum_h2;
    for (int j = 1; j <= nfreq; ++j) {
        pg.freqs[j - 1] = 2.0 * M_PI * j / n;
        pg.ordinates[j - 1] = std::norm(dft[j]) / norm;
    }
    return pg;
}

double parzen_window(double u) {
    const double a = std::abs(u);
    if (a <= 0.5) return 1.0 - 6.0 * u * u + 6.0 * a * a * a;
    if (a <= 1.0) {
        const double t = 1.0 - a;
        return 2.0 * t * t * t;
    }
    return 0.0;
}

std::vector<double> smoothed_periodogram_at(std::span<const double> series,
                                            std::span<const double> freqs, int h) {
    const int n = static_cast<int>(series.size());
    if (n < 4) throw std::invalid_argument("smoothed periodogram: need at least 4 observations");
    if (h < 1 || h > n - 1)
        throw std::invalid_argument("smoothed periodogram: lag window span out of range");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    // centered sample autocovariances R(0)..R(h)
    std::vector<double> acov(h + 1, 0.0);
    for (int s = 0; s <= h; ++s) {
        double acc = 0.0;
        for (int t = 0; t + s < n; ++t) acc += (series[t] - mean) * (series[t + s] - mean);
        acov[s] = acc / n;
    }
    std::vector<double> values(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        double acc = parzen_window(0.0) * acov[0];
        for (int s = 1; s <= h; ++s)
            acc += 2.0 * parzen_window(static_cast<double>(s) / h) * acov[s] *
                   std::cos(s * freqs[i]);
        values[i] = acc / (2.0 * M_PI);
    }
    return values;
}

}  // namespace lrd::hurst
