#pragma once

// Internal FFTW wrapper. Plans are cached per (shape, direction) behind a
// mutex; execution uses the new-array interface, which is thread-safe on
// distinct buffers. Plans are created with FFTW_UNALIGNED so ordinary vector
// storage is valid.

#include <complex>

#include "besovflow/grid.hpp"

namespace besovflow::detail {

// out = sum_x in(x) e^{-2 pi i <k,x>/n}, unnormalized.
void fft_forward(const Grid& g, std::complex<double>* in, std::complex<double>* out);

// out = sum_k in(k) e^{+2 pi i <k,x>/n}, unnormalized.
void fft_backward(const Grid& g, std::complex<double>* in, std::complex<double>* out);

}  // namespace besovflow::detail
