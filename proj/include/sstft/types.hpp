#ifndef SSTFT_TYPES_HPP
#define SSTFT_TYPES_HPP

#include <cstddef>
#include <vector>

namespace sstft {

/// Uniformly sampled real-valued time series.
struct Waveform {
  double sample_rate = 0.0;  // Hz
  double start_time = 0.0;   // s
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  double dt() const { return 1.0 / sample_rate; }
  double duration() const { return samples.size() / sample_rate; }
  double time_at(std::size_t i) const { return start_time + i / sample_rate; }
};

/// Time x frequency magnitude matrix with uniform axes (bin centers).
struct Spectrogram {
  std::vector<double> time_bins;   // s, one per analysis window
  std::vector<double> freq_bins;   // Hz
  std::vector<double> magnitudes;  // row-major, rows() x cols(), >= 0

  std::size_t rows() const { return time_bins.size(); }
  std::size_t cols() const { return freq_bins.size(); }
  double& at(std::size_t row, std::size_t col) { return magnitudes[row * cols() + col]; }
  double at(std::size_t row, std::size_t col) const { return magnitudes[row * cols() + col]; }
  double time_step() const { return time_bins.size() > 1 ? time_bins[1] - time_bins[0] : 0.0; }
  double freq_step() const { return freq_bins.size() > 1 ? freq_bins[1] - freq_bins[0] : 0.0; }
};

}  // namespace sstft

#endif
