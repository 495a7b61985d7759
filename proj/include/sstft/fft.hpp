#ifndef SSTFT_FFT_HPP
#define SSTFT_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace sstft::fft {

std::size_t next_pow2(std::size_t n);

/// In-place unnormalized complex DFT (FFTW backend, deterministic plans).
void forward(std::vector<std::complex<double>>& data);

/// In-place unnormalized inverse DFT; caller divides by size().
void inverse(std::vector<std::complex<double>>& data);

}  // namespace sstft::fft

#endif
