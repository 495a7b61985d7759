#include "sstft/photonic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "sstft/fft.hpp"
#include "sstft/rng.hpp"

namespace sstft {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kNoiseIndexBase = 1ull << 20;  // keep noise and phase draws disjoint
}  // namespace

SbsGainModel SbsGainModel::from(const SystemConfig& config) {
  return {config.gain_fwhm, config.gain_peak_db, config.phonon_lifetime};
}

double sbs_gain(double detuning, const SbsGainModel& model) {
  const double u = 2.0 * detuning / model.fwhm;
  const double gain_db = model.peak_db / (1.0 + u * u);
  return std::pow(10.0, gain_db / 20.0);
}

SweepSchedule SweepSchedule::from(const SystemConfig& config) {
  return {config.sweep_period, config.idle_time, config.chirp_rate, config.sweep_orientation};
}

std::optional<double> gain_passed_frequency(double t, int channel,
                                            const SweepSchedule& schedule,
                                            const SystemConfig& config) {
  if (channel < 1 || channel > config.n_channels)
    throw std::invalid_argument("gain_passed_frequency: channel " + std::to_string(channel) +
                                " outside 1.." + std::to_string(config.n_channels));
  const double tau = std::fmod(t, schedule.total_period());
  if (tau >= schedule.period) return std::nullopt;
  const double base = (channel - 1) * config.sweep_bandwidth;
  const double swept = schedule.chirp_rate * tau;
  return schedule.orientation == SweepOrientation::ascending
             ? base + swept
             : base + (config.sweep_bandwidth - swept);
}

std::vector<FreqTrack> simulation_tracks(const SutSpec& spec, const SystemConfig& config) {
  auto tracks = tracks_of(spec);
  FreqTrack ref{-1, FreqTrack::Interp::hold,
                {{spec.start_time, config.reference_freq, 1.0},
                 {spec.start_time + spec.duration, config.reference_freq, 1.0}}};
  tracks.push_back(std::move(ref));
  return tracks;
}

std::vector<Waveform> channel_envelopes(const std::vector<FreqTrack>& tracks,
                                        const SystemConfig& config, const CombPlan& plan) {
  config.validate();
  const double band = config.analysis_band();
  for (const auto& t : tracks) {
    if (t.min_freq() < -1e-6 * band || t.max_freq() > band * (1.0 + 1e-9)) {
      std::ostringstream os;
      os.precision(12);
      os << "track " << t.component_id << " leaves the analysis band [0, " << band * 1e-9
         << "] GHz (spans " << t.min_freq() * 1e-9 << " to " << t.max_freq() * 1e-9 << " GHz)";
      throw std::invalid_argument("simulate: " + os.str());
    }
  }

  const int n_ch = config.n_channels;
  const double rate = config.sample_rate;
  const double dt = 1.0 / rate;
  const double period = config.sweep_period;
  const double total = config.total_period();
  const double k = config.chirp_rate;
  const double fs = config.sweep_bandwidth;
  const bool ascending = config.sweep_orientation == SweepOrientation::ascending;

  double start = 0.0, stop = 0.0;
  for (const auto& t : tracks) {
    start = std::min(start, t.points.front().time);
    stop = std::max(stop, t.points.back().time);
  }
  if (tracks.empty()) stop = 0.0;
  const auto n = static_cast<std::size_t>(std::llround((stop - start) * rate));

  std::vector<Waveform> envelopes(n_ch);
  for (int c = 0; c < n_ch; ++c) {
    envelopes[c].sample_rate = rate;
    envelopes[c].start_time = start;
    envelopes[c].samples.assign(n, 0.0);
  }
  if (n == 0) return envelopes;

  // envelope model: amplified-above-baseline signal, unit peak for a unit
  // tone at the gain center
  const double peak_minus_one = std::pow(10.0, config.gain_peak_db / 20.0) - 1.0;
  const double gain_c = std::log(10.0) * config.gain_peak_db / 20.0;
  const double half_fwhm = config.gain_fwhm / 2.0;

  for (const auto& track : tracks) {
    const auto& p = track.points;
    const double rel0 = p.front().time - start;
    const double rel1 = p.back().time - start;
    std::size_t i0 = rel0 <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(rel0 * rate - 1e-9));
    std::size_t i1 = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(rel1 * rate - 1e-9)));
    const bool linear = track.interp == FreqTrack::Interp::linear;

    std::size_t seg = 0;
    for (std::size_t i = i0; i < i1; ++i) {
      const double t = start + i * dt;
      while (seg + 2 < p.size() && t >= p[seg + 1].time) ++seg;
      double f, a;
      if (linear) {
        const double u = (t - p[seg].time) / (p[seg + 1].time - p[seg].time);
        f = p[seg].freq + u * (p[seg + 1].freq - p[seg].freq);
        a = p[seg].amplitude + u * (p[seg + 1].amplitude - p[seg].amplitude);
      } else {
        f = p[seg].freq;
        a = p[seg].amplitude;
      }
      if (a == 0.0) continue;

      const double tau = std::fmod(t, total);
      if (tau >= period) continue;  // idle window
      const double swept = ascending ? k * tau : fs - k * tau;
      for (int c = 0; c < n_ch; ++c) {
        const double detuning = f - (c * fs + swept);
        const double u2 = detuning / half_fwhm;
        const double gm1 = std::exp(gain_c / (1.0 + u2 * u2)) - 1.0;
        envelopes[c].samples[i] += a * gm1 / peak_minus_one;
      }
    }
  }

  // phonon-lifetime smoothing: causal one-pole, unit DC gain
  if (config.phonon_lifetime > 0.0) {
    const double decay = std::exp(-dt / config.phonon_lifetime);
    const double alpha = 1.0 - decay;
    for (auto& env : envelopes) {
      double y = 0.0;
      for (auto& s : env.samples) {
        y = decay * y + alpha * s;
        s = y;
      }
    }
  }
  return envelopes;
}

Waveform simulate_pd_output(const SutSpec& spec, const SystemConfig& config,
                            const CombPlan& plan, std::uint64_t seed, bool include_reference) {
  auto tracks = include_reference ? simulation_tracks(spec, config) : tracks_of(spec);
  auto envelopes = channel_envelopes(tracks, config, plan);

  Waveform pd;
  pd.sample_rate = config.sample_rate;
  pd.start_time = envelopes.empty() ? spec.start_time : envelopes.front().start_time;
  const std::size_t n = envelopes.empty() ? 0 : envelopes.front().samples.size();
  pd.samples.assign(n, 0.0);

  for (int c = 0; c < config.n_channels; ++c) {
    const double f_sc = plan.subcarriers[c];
    const double phase0 = kTwoPi * rng::uniform_at(seed, static_cast<std::uint64_t>(c));
    const auto& env = envelopes[c].samples;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = pd.start_time + i / pd.sample_rate;
      pd.samples[i] += env[i] * std::cos(kTwoPi * f_sc * t + phase0);
    }
  }

  if (config.noise_enabled()) {
    // SNR is against the normalized peak pulse power (unit envelope on a carrier)
    const double sigma = std::sqrt(0.5) * std::pow(10.0, -config.noise_snr_db / 20.0);
    for (std::size_t i = 0; i < n; ++i)
      pd.samples[i] += sigma * rng::gaussian_at(seed, kNoiseIndexBase + i);
  }
  return pd;
}

std::vector<SpectralPeak> subcarrier_spectrum(const Waveform& waveform,
                                              const SystemConfig& config,
                                              double threshold_db) {
  if (waveform.samples.empty()) throw std::invalid_argument("subcarrier_spectrum: empty waveform");
  if (waveform.duration() < 4.0 * config.total_period())
    throw std::invalid_argument("subcarrier_spectrum: waveform shorter than 4 sweep periods");

  const std::size_t n = waveform.samples.size();
  const std::size_t m = fft::next_pow2(n);
  std::vector<std::complex<double>> buf(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(kTwoPi * i / n);  // Hann taper
    buf[i] = waveform.samples[i] * w;
  }
  fft::forward(buf);

  const double bin_hz = waveform.sample_rate / static_cast<double>(m);
  const std::size_t half = m / 2;
  double pmax = 0.0;
  std::vector<double> power(half, 0.0);
  for (std::size_t k = 1; k < half; ++k) {
    power[k] = std::norm(buf[k]);
    pmax = std::max(pmax, power[k]);
  }
  if (pmax <= 0.0) return {};

  const double threshold = pmax * std::pow(10.0, threshold_db / 10.0);
  const double merge_gap = config.subcarrier_step / 4.0;

  std::vector<SpectralPeak> peaks;
  double sum_p = 0.0, sum_fp = 0.0, last_f = 0.0;
  bool open = false;
  auto close_cluster = [&]() {
    if (open && sum_p > 0.0) peaks.push_back({sum_fp / sum_p, sum_p});
    open = false;
    sum_p = sum_fp = 0.0;
  };
  for (std::size_t k = 1; k < half; ++k) {
    if (power[k] < threshold) continue;
    const double f = k * bin_hz;
    if (open && f - last_f > merge_gap) close_cluster();
    open = true;
    sum_p += power[k];
    sum_fp += f * power[k];
    last_f = f;
  }
  close_cluster();
  return peaks;
}

}  // namespace sstft
