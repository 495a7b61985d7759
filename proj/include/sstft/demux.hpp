#ifndef SSTFT_DEMUX_HPP
#define SSTFT_DEMUX_HPP

#include <cstdint>
#include <vector>

#include "sstft/config.hpp"
#include "sstft/photonic_sim.hpp"
#include "sstft/types.hpp"

namespace sstft {

/// Envelope of one channel's pulse train (nonnegative magnitudes at the
/// source sample rate).
struct ChannelEnvelope {
  int channel = 0;  // 1-based
  Waveform envelope;
  double subcarrier = 0.0;  // Hz
};

struct Pulse {
  int channel = 0;
  std::int64_t period_index = 0;
  double tau = 0.0;        // centroid offset within the active sweep window, s
  double amplitude = 0.0;  // peak envelope value
  double fwhm = 0.0;       // s
};

/// Affine frequency-to-time map f(tau, n) = (n-1)*f_s + offset + sign*k*tau,
/// anchored on the reference tone.
struct FttmCalibration {
  int sign = +1;          // +1 ascending, -1 descending
  double offset = 0.0;    // a, Hz
  double chirp_rate = 0.0;
  double channel_bandwidth = 0.0;  // f_s

  // reference pulse statistics
  int ref_channel = 0;
  double ref_tau = 0.0;
  double ref_jitter = 0.0;  // RMS centroid deviation across periods, s
  std::size_t periods_searched = 0;
  std::size_t periods_used = 0;

  double freq_at(double tau, int channel) const {
    return (channel - 1) * channel_bandwidth + offset + sign * chirp_rate * tau;
  }
};

enum class CalibrationSign { from_config, automatic };

/// Quadrature product demodulation at the subcarrier, zero-phase low-pass at
/// the stated cutoff, magnitude extraction. Envelope features align with the
/// pd time axis (no group delay). cutoff must not exceed subcarrier_step/2.
ChannelEnvelope demodulate_channel(const Waveform& pd, double subcarrier, double cutoff,
                                   const SystemConfig& config);

/// Threshold detection within each active sweep window: contiguous
/// super-threshold regions become pulses (centroid, peak, FWHM), split at
/// valleys below 50% of the lesser adjacent peak. The threshold is
/// threshold_rel of the per-period maximum, floored at 5x the envelope
/// median (noise floor).
std::vector<Pulse> detect_pulses(const ChannelEnvelope& env, const SweepSchedule& schedule,
                                 double threshold_rel = 0.3);

/// Anchors the affine tau->frequency map on the most period-stable pulse in
/// the reference tone's channel. Throws CalibrationError when no stable
/// reference pulse exists.
FttmCalibration calibrate(const std::vector<Pulse>& pulses, double reference_freq,
                          const SystemConfig& config,
                          CalibrationSign sign_mode = CalibrationSign::from_config);

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Accumulates envelope samples into the frequency bin nearest the
/// calibrated map, one column per full sweep period; idle-window samples are
/// discarded. Mapped frequencies are clamped into the channel's coverage.
/// The frequency grid spans [0, N*f_s) with the given step (default
/// gain_fwhm/2).
Spectrogram splice_spectrogram(const std::vector<ChannelEnvelope>& envelopes,
                               const FttmCalibration& calib, const SystemConfig& config,
                               double grid_step = 0.0);

/// Mirror test: zeroes cells within `guard` of a channel edge in columns
/// where the opposite edge of the same channel holds a stronger response.
/// guard <= 0 picks the default 1.5 * max(gain_fwhm, k * phonon_lifetime).
Spectrogram suppress_boundary_ghosts(const Spectrogram& spec, const SystemConfig& config,
                                     double guard = 0.0);

}  // namespace sstft

#endif
