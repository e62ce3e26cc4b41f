#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lrd::detail {

namespace {

// fftw planning is not thread safe; execution on distinct buffers is.
// Plans live for the whole process (leaked deliberately).
std::mutex plan_mutex;

fftw_plan forward_plan(int n) {
    static auto* cache = new std::map<int, fftw_plan>();
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_plan& p = (*cache)[n];
    if (!p) {
        double* in = fftw_alloc_real(n);
        fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
        p = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
    }
    return p;
}

fftw_plan backward_plan(int n) {
    static auto* cache = new std::map<int, fftw_plan>();
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_plan& p = (*cache)[n];
    if (!p) {
        fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
        double* out = fftw_alloc_real(n);
        p = fftw_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
    }
    return p;
}

}  // namespace

std::vector<std::complex<double>> real_dft(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    if (n < 1) throw std::invalid_argument("real_dft: empty input");
    fftw_plan plan = forward_plan(n);
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    std::memcpy(in, x.data(), n * sizeof(double));
    fftw_execute_dft_r2c(plan, in, out);
    std::vector<std::complex<double>> result(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) result[k] = {out[k][0], out[k][1]};
    fftw_free(in);
    fftw_free(out);
    return result;
}

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b,
                                 std::size_t out_len) {
    const std::size_t full = a.size() + b.size() - 1;
    std::size_t len = 1;
    while (len < full) len <<= 1;
    const int n = static_cast<int>(len);

    fftw_plan fwd = forward_plan(n);
    fftw_plan bwd = backward_plan(n);
    double* buf = fftw_alloc_real(n);
    fftw_complex* fa = fftw_alloc_complex(n / 2 + 1);
    fftw_complex* fb = fftw_alloc_complex(n / 2 + 1);

    std::memset(buf, 0, n * sizeof(double));
    std::memcpy(buf, a.data(), a.size() * sizeof(double));
    fftw_execute_dft_r2c(fwd, buf, fa);
    std::memset(buf, 0, n * sizeof(double));
    std::memcpy(buf, b.data(), b.size() * sizeof(double));
    fftw_execute_dft_r2c(fwd, buf, fb);

    for (int k = 0; k <= n / 2; ++k) {
        const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
        const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
        fa[k][0] = re;
        fa[k][1] = im;
    }
    fftw_execute_dft_c2r(bwd, fa, buf);

    std::vector<double> result(out_len);
    const double scale = 1.0 / n;
    for (std::size_t i = 0; i < out_len; ++i) result[i] = buf[i] * scale;
    fftw_free(buf);
    fftw_free(fa);
    fftw_free(fb);
    return result;
}

}  // namespace lrd::detail
