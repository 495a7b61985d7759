#include "sstft/fft.hpp"

#include <fftw3.h>

#include <stdexcept>

namespace sstft::fft {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

void transform(std::vector<std::complex<double>>& data, int direction) {
  if (data.empty()) throw std::invalid_argument("fft: empty input");
  // FFTW_ESTIMATE keeps planning deterministic and does not touch the buffer.
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()),
                                    reinterpret_cast<fftw_complex*>(data.data()),
                                    reinterpret_cast<fftw_complex*>(data.data()),
                                    direction, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("fft: planning failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

}  // namespace

void forward(std::vector<std::complex<double>>& data) { transform(data, FFTW_FORWARD); }
void inverse(std::vector<std::complex<double>>& data) { transform(data, FFTW_BACKWARD); }

}  // namespace sstft::fft
