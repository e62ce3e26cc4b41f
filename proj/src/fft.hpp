#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lrd::detail {

/// Real-input DFT, bins 0..n/2 (unnormalized, FFTW halfcomplex layout).
/// Plans are cached per size and executed on consistently aligned buffers,
/// so repeated calls are bit-reproducible.
std::vector<std::complex<double>> real_dft(std::span<const double> x);

/// First out_len terms of the linear convolution a*b via zero-padded FFT.
std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b,
                                 std::size_t out_len);

}  // namespace lrd::detail
