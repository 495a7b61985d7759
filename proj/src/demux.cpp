#include "sstft/demux.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sstft/fft.hpp"

namespace sstft {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}
}  // namespace

ChannelEnvelope demodulate_channel(const Waveform& pd, double subcarrier, double cutoff,
                                   const SystemConfig& config) {
  if (pd.samples.empty()) throw std::invalid_argument("demodulate: empty waveform");
  if (!(cutoff > 0.0)) throw std::invalid_argument("demodulate: cutoff must be > 0");
  if (cutoff > config.subcarrier_step / 2.0 + 1e-9) {
    std::ostringstream os;
    os << "demodulate: cutoff " << cutoff * 1e-6 << " MHz exceeds half the subcarrier spacing ("
       << config.subcarrier_step / 2.0 * 1e-6 << " MHz), adjacent channels would leak";
    throw std::invalid_argument(os.str());
  }
  if (!(subcarrier + cutoff < pd.sample_rate / 2.0))
    throw std::invalid_argument("demodulate: subcarrier plus cutoff exceeds Nyquist");

  const std::size_t n = pd.samples.size();
  // pad past the filter's impulse extent so circular wrap cannot reach the data
  const std::size_t m = fft::next_pow2(n + 8192);
  std::vector<std::complex<double>> buf(m, 0.0);
  const double w = kTwoPi * subcarrier / pd.sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    const double ph = w * static_cast<double>(i);
    buf[i] = pd.samples[i] * std::complex<double>(std::cos(ph), -std::sin(ph));
  }
  fft::forward(buf);

  // zero-phase low-pass: flat to 0.8*cutoff, raised-cosine to 1.2*cutoff
  const double f_lo = 0.8 * cutoff;
  const double f_hi = 1.2 * cutoff;
  const double bin_hz = pd.sample_rate / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    double f = k * bin_hz;
    if (f > pd.sample_rate / 2.0) f -= pd.sample_rate;  // negative frequencies
    const double af = std::abs(f);
    double h;
    if (af <= f_lo) {
      h = 1.0;
    } else if (af >= f_hi) {
      h = 0.0;
    } else {
      h = 0.5 * (1.0 + std::cos(3.14159265358979323846 * (af - f_lo) / (f_hi - f_lo)));
    }
    buf[k] *= h;
  }
  fft::inverse(buf);

  ChannelEnvelope out;
  out.subcarrier = subcarrier;
  out.envelope.sample_rate = pd.sample_rate;
  out.envelope.start_time = pd.start_time;
  out.envelope.samples.resize(n);
  const double scale = 2.0 / static_cast<double>(m);  // x2 restores the envelope amplitude
  for (std::size_t i = 0; i < n; ++i) out.envelope.samples[i] = std::abs(buf[i]) * scale;
  return out;
}

std::vector<Pulse> detect_pulses(const ChannelEnvelope& env, const SweepSchedule& schedule,
                                 double threshold_rel) {
  if (!(threshold_rel > 0.0 && threshold_rel < 1.0))
    throw std::invalid_argument("detect_pulses: threshold_rel must lie in (0, 1)");
  const auto& s = env.envelope.samples;
  if (s.empty()) return {};

  const double rate = env.envelope.sample_rate;
  const double dt = 1.0 / rate;
  const double total = schedule.total_period();
  const double noise_floor = 5.0 * median_of(s);

  const double t_begin = env.envelope.start_time;
  const double t_end = t_begin + env.envelope.duration();
  const auto p_first = static_cast<std::int64_t>(std::floor(t_begin / total));
  const auto p_last = static_cast<std::int64_t>(std::ceil(t_end / total));

  std::vector<Pulse> pulses;
  for (std::int64_t p = p_first; p <= p_last; ++p) {
    // active window of period p, clipped to the envelope
    const double w_begin = std::max(p * total, t_begin);
    const double w_end = std::min(p * total + schedule.period, t_end);
    if (w_end <= w_begin) continue;
    const auto i0 = static_cast<std::size_t>(std::ceil((w_begin - t_begin) * rate - 1e-9));
    const auto i1 = std::min<std::size_t>(s.size(),
        static_cast<std::size_t>(std::ceil((w_end - t_begin) * rate - 1e-9)));
    if (i1 <= i0) continue;

    double wmax = 0.0;
    for (std::size_t i = i0; i < i1; ++i) wmax = std::max(wmax, s[i]);
    const double threshold = std::max(threshold_rel * wmax, noise_floor);
    if (wmax <= 0.0 || wmax < threshold) continue;

    std::size_t i = i0;
    while (i < i1) {
      if (s[i] < threshold) { ++i; continue; }
      std::size_t j = i;
      while (j < i1 && s[j] >= threshold) ++j;  // region [i, j)

      // local maxima within the region, then split at valleys below half the
      // lesser of the two adjacent peaks
      std::vector<std::size_t> maxima;
      for (std::size_t a = i; a < j; ++a) {
        const bool rising = a == i || s[a] >= s[a - 1];
        const bool falling = a + 1 == j || s[a] > s[a + 1];
        if (rising && falling) maxima.push_back(a);
      }
      std::vector<std::size_t> bounds{i};
      for (std::size_t mIdx = 0; mIdx + 1 < maxima.size(); ++mIdx) {
        std::size_t valley = maxima[mIdx];
        for (std::size_t a = maxima[mIdx]; a <= maxima[mIdx + 1]; ++a) {
          if (s[a] < s[valley]) valley = a;
        }
        if (s[valley] < 0.5 * std::min(s[maxima[mIdx]], s[maxima[mIdx + 1]])) {
          bounds.push_back(valley);
        }
      }
      bounds.push_back(j);

      for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
        const std::size_t r0 = bounds[b], r1 = bounds[b + 1];
        double sum = 0.0, moment = 0.0, peak = 0.0;
        std::size_t peak_idx = r0;
        for (std::size_t a = r0; a < r1; ++a) {
          sum += s[a];
          moment += s[a] * (t_begin + a * dt);
          if (s[a] > peak) { peak = s[a]; peak_idx = a; }
        }
        if (sum <= 0.0) continue;
        const double centroid = moment / sum;
        const double tau = centroid - p * total;
        if (tau < 0.0 || tau >= schedule.period) continue;

        // FWHM by linear interpolation around the peak
        const double half = peak / 2.0;
        double left = t_begin + r0 * dt, right = t_begin + (r1 - 1) * dt;
        for (std::size_t a = peak_idx; a > r0; --a) {
          if (s[a - 1] < half) {
            const double frac = (half - s[a - 1]) / (s[a] - s[a - 1]);
            left = t_begin + (a - 1 + frac) * dt;
            break;
          }
        }
        for (std::size_t a = peak_idx; a + 1 < r1; ++a) {
          if (s[a + 1] < half) {
            const double frac = (s[a] - half) / (s[a] - s[a + 1]);
            right = t_begin + (a + frac) * dt;
            break;
          }
        }
        pulses.push_back({env.channel, p, tau, peak, std::max(right - left, dt)});
      }
      i = j;
    }
  }
  return pulses;
}

FttmCalibration calibrate(const std::vector<Pulse>& pulses, double reference_freq,
                          const SystemConfig& config, CalibrationSign sign_mode) {
  const ChannelPos ref_pos = map_frequency_to_channel(reference_freq, config);
  std::vector<const Pulse*> ref_pulses;
  std::int64_t period_lo = 0, period_hi = -1;
  for (const auto& p : pulses) {
    if (p.channel != ref_pos.channel) continue;
    ref_pulses.push_back(&p);
    if (period_hi < period_lo) {
      period_lo = period_hi = p.period_index;
    } else {
      period_lo = std::min(period_lo, p.period_index);
      period_hi = std::max(period_hi, p.period_index);
    }
  }
  const std::size_t periods_searched =
      period_hi >= period_lo ? static_cast<std::size_t>(period_hi - period_lo + 1) : 0;

  auto no_reference = [&](const std::string& why) -> CalibrationError {
    std::ostringstream os;
    os << "calibrate: no stable reference pulse in channel " << ref_pos.channel << " (" << why
       << "; periods searched: " << periods_searched << ", candidate pulses: " << ref_pulses.size()
       << ")";
    return CalibrationError(os.str());
  };
  if (ref_pulses.empty()) throw no_reference("no pulses detected");

  // the reference tone sits at a fixed tau; sweeping components drift.
  // Histogram taus and keep the bin covering the most distinct periods.
  std::vector<double> fwhms;
  for (const auto* p : ref_pulses) fwhms.push_back(p->fwhm);
  const double bin_width = std::max(2.0 * median_of(fwhms), 4.0 / config.sample_rate);

  std::map<std::int64_t, std::set<std::int64_t>> bin_periods;
  for (const auto* p : ref_pulses)
    bin_periods[static_cast<std::int64_t>(std::floor(p->tau / bin_width))].insert(p->period_index);
  std::int64_t best_bin = 0;
  std::size_t best_count = 0;
  for (const auto& [bin, periods] : bin_periods) {
    if (periods.size() > best_count) { best_count = periods.size(); best_bin = bin; }
  }
  if (best_count * 2 <= periods_searched)
    throw no_reference("most stable pulse present in only " + std::to_string(best_count) + " of " +
                       std::to_string(periods_searched) + " periods");

  // pulses within the winning bin +/- one bin, one per period (strongest)
  std::map<std::int64_t, const Pulse*> per_period;
  for (const auto* p : ref_pulses) {
    const auto bin = static_cast<std::int64_t>(std::floor(p->tau / bin_width));
    if (std::llabs(bin - best_bin) > 1) continue;
    auto& slot = per_period[p->period_index];
    if (!slot || p->amplitude > slot->amplitude) slot = p;
  }
  std::vector<double> taus;
  double fwhm_sum = 0.0;
  for (const auto& [period, p] : per_period) {
    taus.push_back(p->tau);
    fwhm_sum += p->fwhm;
  }
  const double tau_ref = median_of(taus);
  double jitter_sq = 0.0;
  for (double t : taus) jitter_sq += (t - tau_ref) * (t - tau_ref);
  const double jitter = std::sqrt(jitter_sq / taus.size());
  const double mean_fwhm = fwhm_sum / taus.size();
  if (jitter >= mean_fwhm)
    throw no_reference("centroid jitter " + std::to_string(jitter * 1e9) + " ns exceeds pulse width");

  auto solve = [&](int sign) {
    FttmCalibration cal;
    cal.sign = sign;
    cal.chirp_rate = config.chirp_rate;
    cal.channel_bandwidth = config.sweep_bandwidth;
    cal.offset = reference_freq - (ref_pos.channel - 1) * config.sweep_bandwidth -
                 sign * config.chirp_rate * tau_ref;
    cal.ref_channel = ref_pos.channel;
    cal.ref_tau = tau_ref;
    cal.ref_jitter = jitter;
    cal.periods_searched = periods_searched;
    cal.periods_used = taus.size();
    return cal;
  };

  int sign;
  if (sign_mode == CalibrationSign::from_config) {
    sign = config.sweep_orientation == SweepOrientation::ascending ? +1 : -1;
  } else {
    // residual of re-mapping each period's reference pulse is identical for
    // both signs (constant tone), so fall back to the smaller ideal-offset
    // deviation: ascending expects a ~ 0, descending a ~ f_s.
    const FttmCalibration up = solve(+1), down = solve(-1);
    sign = std::abs(up.offset) <= std::abs(down.offset - config.sweep_bandwidth) ? +1 : -1;
  }
  FttmCalibration cal = solve(sign);
  const double ideal = sign > 0 ? 0.0 : config.sweep_bandwidth;
  if (std::abs(cal.offset - ideal) >= config.sweep_bandwidth)
    throw no_reference("calibrated offset deviates by a whole channel");
  return cal;
}

Spectrogram splice_spectrogram(const std::vector<ChannelEnvelope>& envelopes,
                               const FttmCalibration& calib, const SystemConfig& config,
                               double grid_step) {
  if (envelopes.empty()) throw std::invalid_argument("splice: no channel envelopes");
  const double df = grid_step > 0.0 ? grid_step : config.gain_fwhm / 2.0;
  const double band = config.analysis_band();
  const auto n_bins = static_cast<std::size_t>(std::llround(band / df));
  if (n_bins == 0) throw std::invalid_argument("splice: grid step wider than the analysis band");

  const double total = config.total_period();
  const double t_begin = envelopes.front().envelope.start_time;
  const double t_end = t_begin + envelopes.front().envelope.duration();
  const auto p_first = static_cast<std::int64_t>(std::ceil(t_begin / total - 1e-9));
  const auto p_after = static_cast<std::int64_t>(std::floor(t_end / total + 1e-9));
  if (p_after <= p_first) throw std::invalid_argument("splice: envelopes cover less than one full period");

  Spectrogram spec;
  spec.freq_bins.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) spec.freq_bins[b] = (b + 0.5) * df;
  for (std::int64_t p = p_first; p < p_after; ++p)
    spec.time_bins.push_back((p + 0.5) * total);
  spec.magnitudes.assign(spec.rows() * n_bins, 0.0);

  for (const auto& ce : envelopes) {
    const auto& s = ce.envelope.samples;
    const double rate = ce.envelope.sample_rate;
    const double ch_lo = (ce.channel - 1) * config.sweep_bandwidth;
    const double ch_hi = ce.channel * config.sweep_bandwidth;

    for (std::size_t r = 0; r < spec.rows(); ++r) {
      const std::int64_t p = p_first + static_cast<std::int64_t>(r);
      const double w_begin = p * total;
      const auto i0 = static_cast<std::size_t>(std::ceil((w_begin - t_begin) * rate - 1e-9));
      const auto i1 = std::min<std::size_t>(s.size(),
          static_cast<std::size_t>(std::ceil((w_begin + config.sweep_period - t_begin) * rate - 1e-9)));
      for (std::size_t i = i0; i < i1; ++i) {
        const double tau = (t_begin + i / rate) - w_begin;
        double f = calib.freq_at(tau, ce.channel);
        f = std::clamp(f, ch_lo, ch_hi - df * 1e-3);  // keep energy inside the channel
        auto bin = static_cast<std::size_t>(f / df);
        if (bin >= n_bins) bin = n_bins - 1;
        spec.at(r, bin) += s[i];
      }
    }
  }
  return spec;
}

Spectrogram suppress_boundary_ghosts(const Spectrogram& spec, const SystemConfig& config,
                                     double guard) {
  if (guard <= 0.0)
    guard = 1.5 * std::max(config.gain_fwhm, config.chirp_rate * config.phonon_lifetime);
  Spectrogram out = spec;
  if (out.freq_bins.empty() || guard <= 0.0) return out;
  const double df = out.freq_step();
  if (df <= 0.0) return out;

  for (int c = 1; c <= config.n_channels; ++c) {
    const double lo = (c - 1) * config.sweep_bandwidth;
    const double hi = c * config.sweep_bandwidth;
    std::vector<std::size_t> low_bins, high_bins;
    for (std::size_t b = 0; b < out.cols(); ++b) {
      const double f = out.freq_bins[b];
      if (f >= lo && f < lo + guard) low_bins.push_back(b);
      if (f > hi - guard && f < hi) high_bins.push_back(b);
    }
    if (low_bins.empty() || high_bins.empty()) continue;

    for (std::size_t r = 0; r < out.rows(); ++r) {
      double low_peak = 0.0, high_peak = 0.0;
      for (auto b : low_bins) low_peak = std::max(low_peak, out.at(r, b));
      for (auto b : high_bins) high_peak = std::max(high_peak, out.at(r, b));
      if (high_peak > low_peak) {
        for (auto b : low_bins) out.at(r, b) = 0.0;
      } else if (low_peak > high_peak) {
        for (auto b : high_bins) out.at(r, b) = 0.0;
      }
    }
  }
  return out;
}

}  // namespace sstft
