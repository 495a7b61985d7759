#ifndef SSTFT_CONFIG_HPP
#define SSTFT_CONFIG_HPP

#include <string>

namespace sstft {

/// Direction in which the gain-passed frequency moves within a sweep period.
enum class SweepOrientation { ascending, descending };

/// Scalar parameters of the measurement system. All SI base units (Hz, s).
///
/// The sweep triple must satisfy sweep_bandwidth = chirp_rate * sweep_period;
/// validate() enforces this to 1e-9 relative along with the range and Nyquist
/// constraints. noise_snr_db is measured against the normalized peak pulse
/// power; +infinity disables noise exactly.
struct SystemConfig {
  int n_channels = 1;
  double sweep_bandwidth = 0.0;    // f_s per channel, Hz
  double sweep_period = 0.0;       // T, active sweep time, s
  double idle_time = 0.0;          // guard interval appended to each period, s
  double chirp_rate = 0.0;         // k, Hz/s
  double brillouin_shift = 10.8e9; // Hz
  double gain_fwhm = 20e6;         // 3-dB gain bandwidth, Hz
  double gain_peak_db = 20.0;
  double phonon_lifetime = 10e-9;  // s
  double pump_base_freq = 0.0;     // absolute optical frequency of pump line 1, Hz
  double subcarrier_min = 0.0;     // Hz
  double subcarrier_step = 0.0;    // delta-f between adjacent subcarriers, Hz
  double reference_freq = 0.0;     // fixed reference tone, Hz
  double sample_rate = 0.0;        // photodetector-output simulation rate, Hz
  double noise_snr_db = 30.0;
  SweepOrientation sweep_orientation = SweepOrientation::ascending;

  double analysis_band() const { return n_channels * sweep_bandwidth; }
  double total_period() const { return sweep_period + idle_time; }
  bool noise_enabled() const;

  /// Throws std::invalid_argument describing the first failed constraint.
  void validate() const;
};

/// Parses a JSON config document. Unknown keys are rejected; the parsed
/// config is validated before it is returned.
SystemConfig parse_config(const std::string& json_text);
SystemConfig load_config(const std::string& path);

std::string orientation_name(SweepOrientation o);

}  // namespace sstft

#endif
