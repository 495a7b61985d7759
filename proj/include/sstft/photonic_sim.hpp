#ifndef SSTFT_PHOTONIC_SIM_HPP
#define SSTFT_PHOTONIC_SIM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sstft/config.hpp"
#include "sstft/freq_plan.hpp"
#include "sstft/siggen.hpp"
#include "sstft/types.hpp"

namespace sstft {

/// Quasi-static Lorentzian gain with phonon-lifetime smoothing.
struct SbsGainModel {
  double fwhm = 20e6;             // Hz
  double peak_db = 20.0;
  double phonon_lifetime = 10e-9; // s

  static SbsGainModel from(const SystemConfig& config);
};

/// Linear amplitude gain at the given detuning from line center:
/// gain_db = peak_db / (1 + (2*detuning/fwhm)^2), returned as 10^(dB/20).
double sbs_gain(double detuning, const SbsGainModel& model);

struct SweepSchedule {
  double period = 0.0;      // T, s
  double idle = 0.0;        // s
  double chirp_rate = 0.0;  // Hz/s
  SweepOrientation orientation = SweepOrientation::ascending;

  double total_period() const { return period + idle; }
  static SweepSchedule from(const SystemConfig& config);
};

/// SUT frequency currently aligned with channel n's gain center, or nullopt
/// during the idle window. Channel is 1-based.
std::optional<double> gain_passed_frequency(double t, int channel,
                                            const SweepSchedule& schedule,
                                            const SystemConfig& config);

/// Tracks fed to the simulator: the SUT components plus the reference tone
/// (component id -1) spanning the SUT duration.
std::vector<FreqTrack> simulation_tracks(const SutSpec& spec, const SystemConfig& config);

/// Per-channel baseband pulse envelopes (amplified-above-baseline signal,
/// normalized so a unit tone at the gain peak gives 1.0), phonon-smoothed.
/// Channel n's envelope is element n-1.
std::vector<Waveform> channel_envelopes(const std::vector<FreqTrack>& tracks,
                                        const SystemConfig& config, const CombPlan& plan);

/// Simulated photodetector output: each channel envelope on its subcarrier
/// plus seeded AWGN. Subcarrier phases and noise both derive from the seed.
/// include_reference=false drops the reference tone (linearity checks).
Waveform simulate_pd_output(const SutSpec& spec, const SystemConfig& config,
                            const CombPlan& plan, std::uint64_t seed = 0,
                            bool include_reference = true);

struct SpectralPeak {
  double freq = 0.0;   // Hz, power-weighted cluster centroid
  double power = 0.0;  // summed power of the cluster's bins
};

/// Power-spectrum peaks of the PD output above threshold_db relative to the
/// strongest bin, clustered per subcarrier. Requires >= 4 sweep periods.
std::vector<SpectralPeak> subcarrier_spectrum(const Waveform& waveform,
                                              const SystemConfig& config,
                                              double threshold_db = -30.0);

}  // namespace sstft

#endif
